#include "cuspnorm/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm::cli {

using json_io::json;

namespace {

Mat2 parse_matrix(const std::string& text) {
  // "a,b,c,d" or "[[a,b],[c,d]]"
  std::string flat;
  for (char ch : text) {
    if (ch != '[' && ch != ']' && ch != ' ') flat += ch;
  }
  std::vector<Integer> e;
  std::stringstream ss(flat);
  std::string item;
  while (std::getline(ss, item, ',')) e.push_back(parse_integer(item));
  if (e.size() != 4) throw Error(ErrorKind::ParseError, "matrix must be 'a,b,c,d', got '" + text + "'");
  return {e[0], e[1], e[2], e[3]};
}

struct Options {
  std::int64_t level = 0, m = 1, l = 1, x = 1;
  std::string point, delta = "1", lemma, levels, out, format = "json", sigma, which, nu;
  int samples = 2, jobs = 1;
  std::uint64_t seed = 1;
  std::int64_t max_c = EnumerationLimits{}.max_c_values;
  std::int64_t budget = 1000;
  bool text = false;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string render_text(const DerivationReport& r) {
  std::ostringstream os;
  os << "case " << to_string(r.which) << ": exponent " << r.exponent_text << " (worst " << to_string(r.worst_exponent)
     << "), derivation " << (r.ok ? "ok" : "FAILED") << "\n";
  int k = 1;
  for (const auto& s : r.steps) {
    os << "  " << k++ << ". [" << (s.ok ? "ok" : "FAIL") << "] " << s.op << ": " << s.input << " -> " << s.output
       << "\n";
    if (!s.certificate.empty()) os << "       " << s.certificate << "\n";
  }
  for (const auto& a : r.axioms) os << "  axiom: " << a << "\n";
  os << "  " << r.epsilon_note << "\n";
  return os.str();
}

CommandResult run(const std::vector<std::string>& argv) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult res;
  Options o;
  CLI::App app{"Exact computations on Gamma0(N): cusps, conjugation, counting, Hecke cosets, exponents", "cuspnorm"};
  app.require_subcommand(1);

  auto* cusps = app.add_subcommand("cusps", "Cusp classes of Gamma0(N) with widths");
  cusps->add_option("--level", o.level, "Level N")->required()->check(CLI::PositiveNumber);

  auto* reduce = app.add_subcommand("reduce", "Gap-principle reduction of a point");
  reduce->add_option("--level", o.level)->required()->check(CLI::PositiveNumber);
  reduce->add_option("--point", o.point, "X,Y with rational coordinates")->required();

  auto* count = app.add_subcommand("count", "Classified matrix counts N_*, N_u, N_p");
  count->add_option("--level", o.level)->required()->check(CLI::PositiveNumber);
  count->add_option("--m", o.m)->check(CLI::PositiveNumber);
  count->add_option("--l", o.l)->required()->check(CLI::PositiveNumber);
  count->add_option("--delta", o.delta, "P/Q");
  count->add_option("--point", o.point)->required();
  count->add_option("--max-c", o.max_c, "Budget on admissible c values")->check(CLI::PositiveNumber);

  auto* harness = app.add_subcommand("harness", "Sweep a counting lemma over levels");
  harness->add_option("--lemma", o.lemma, "eq1..eq7, para or ampl")->required();
  harness->add_option("--levels", o.levels, "A..B")->required();
  harness->add_option("--delta", o.delta);
  harness->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
  harness->add_option("--seed", o.seed);
  harness->add_option("--out", o.out, "Write the table here instead of stdout");
  harness->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  harness->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);
  harness->add_option("--max-c", o.max_c)->check(CLI::PositiveNumber);

  auto* hecke = app.add_subcommand("hecke", "Coset representatives of Gamma0(N;M) in Delta(l,N;M)");
  hecke->add_option("--level", o.level)->required()->check(CLI::PositiveNumber);
  hecke->add_option("--m", o.m)->check(CLI::PositiveNumber);
  hecke->add_option("--l", o.l)->required()->check(CLI::PositiveNumber);
  hecke->add_option("--check-conjugation", o.sigma, "sigma as a,b,c,d");
  hecke->add_option("--budget", o.budget, "Random translates per check")->check(CLI::NonNegativeNumber);

  auto* exponent = app.add_subcommand("exponent", "Replay the sup-norm exponent derivation");
  exponent->add_option("--case", o.which, "main or case2")->required()->check(CLI::IsMember({"main", "case2"}));
  exponent->add_option("--nu", o.nu, "log_N N0 as P/Q in [0, 1/2]");
  exponent->add_flag("--text", o.text, "Human-readable rendering");

  auto* smooth = app.add_subcommand("smooth", "Count t <= X supported on the primes of N");
  smooth->add_option("--x", o.x)->required()->check(CLI::PositiveNumber);
  smooth->add_option("--level", o.level)->required()->check(CLI::PositiveNumber);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    res.output = app.help();
    res.exit_code = 0;
    return res;
  } catch (const CLI::ParseError& e) {
    res.exit_code = 2;
    res.log = std::string("usage error: ") + e.what() + "\n";
    return res;
  }

  try {
    if (*cusps) {
      res.command = "cusps";
      res.inputs = {{"level", o.level}};
      res.payload = json_io::cusps_to_json(o.level, enumerate_cusps(o.level));
    } else if (*reduce) {
      res.command = "reduce";
      const PointH z = parse_point(o.point);
      res.inputs = {{"level", o.level}, {"point", json_io::to_json(z)}};
      res.payload = json_io::to_json(gap_reduce(z, o.level));
    } else if (*count) {
      res.command = "count";
      const PointH z = parse_point(o.point);
      const Rational delta = parse_rational(o.delta);
      res.inputs = {{"level", o.level}, {"M", o.m}, {"l", o.l}, {"delta", json_io::to_json(delta)},
                    {"point", json_io::to_json(z)}};
      EnumerationLimits lim;
      lim.max_c_values = o.max_c;
      json j = json_io::to_json(classify_counts(z, o.l, delta, o.level, o.m, true, lim));
      json certs = json::array();
      for (const auto& c : parabolic_certify(z, o.l, delta, o.level, o.m)) certs.push_back(json_io::to_json(c));
      j["parabolic_certificates"] = certs;
      j["in_G"] = o.level % (o.m * o.m) == 0 ? json(is_in_G(z, o.level, o.m)) : json(nullptr);
      res.payload = j;
    } else if (*harness) {
      res.command = "harness";
      HarnessConfig cfg;
      cfg.lemma = parse_lemma(o.lemma);
      std::tie(cfg.N_lo, cfg.N_hi) = parse_level_range(o.levels);
      cfg.delta = parse_rational(o.delta);
      cfg.samples = o.samples;
      cfg.seed = o.seed;
      cfg.jobs = o.jobs;
      cfg.limits.max_c_values = o.max_c;
      validate(cfg);
      res.inputs = {{"lemma", o.lemma}, {"levels", o.levels}, {"delta", json_io::to_json(cfg.delta)},
                    {"samples", o.samples}, {"seed", o.seed}, {"format", o.format}, {"jobs", o.jobs}};
      const HarnessResult hr = run_harness(cfg);
      res.payload = json_io::to_json(hr);
      const std::string body = o.format == "csv" ? json_io::harness_csv(hr) : dump(res.payload);
      res.log += "harness " + o.lemma + ": " + std::to_string(hr.rows.size()) + " rows, " +
                 std::to_string(hr.skipped.size()) + " skipped\n";
      if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + o.out + "'");
        f << body;
        json summary = {{"written", o.out}, {"format", o.format}, {"rows", hr.rows.size()}};
        summary["max_ratio"] = res.payload["max_ratio"];
        summary["certificate_violations"] = hr.certificate_violations;
        res.output = dump(summary);
      } else {
        res.output = body;
      }
    } else if (*hecke) {
      res.command = "hecke";
      res.inputs = {{"level", o.level}, {"M", o.m}, {"l", o.l}};
      const CosetTable t = coset_reps_delta(o.l, o.level, o.m);
      json j = json_io::to_json(t);
      j["sigma1"] = arith::sigma1(o.l);
      const CosetCountVerdict cv = coset_count_invariance(o.l, o.level, o.m);
      j["count_invariance"] = {{"count_NM", cv.count_NM}, {"count_N", cv.count_N}, {"equal", cv.equal}};
      if (!o.sigma.empty()) {
        const Mat2 sigma = parse_matrix(o.sigma);
        res.inputs["sigma"] = json_io::to_json(sigma);
        json c = json_io::to_json(conjugation_invariance(sigma, o.l, o.level, o.m, o.budget));
        c["sigma"] = json_io::to_json(sigma);
        c["conjugated_reps_valid"] = conjugated_reps_valid(sigma, t);
        j["conjugation"] = c;
      }
      res.payload = j;
    } else if (*exponent) {
      res.command = "exponent";
      const TheoremCase which = parse_theorem_case(o.which);
      res.inputs = {{"case", o.which}};
      const DerivationReport rep = theorem_pipeline(which);
      json j = json_io::to_json(rep);
      if (!o.nu.empty()) {
        const Rational nu = parse_rational(o.nu);
        res.inputs["nu"] = json_io::to_json(nu);
        if (sgn(nu) < 0 || nu > Rational(1, 2)) throw Error(ErrorKind::OutOfRange, "nu must lie in [0, 1/2]");
        j["nu"] = json_io::to_json(nu);
        j["sup_norm_exponent"] = json_io::to_json(rep.exponent.at(nu));
      }
      res.payload = j;
      if (o.text) res.output = render_text(rep);
    } else if (*smooth) {
      res.command = "smooth";
      res.inputs = {{"x", o.x}, {"level", o.level}};
      res.payload = {{"x", o.x}, {"level", o.level}, {"count", smooth_count(o.x, o.level)}};
    }
    if (res.output.empty()) res.output = dump(res.payload);
  } catch (const Error& e) {
    res.exit_code = 1;
    res.payload = nullptr;
    res.output.clear();
    json err = {{"error", {{"kind", std::string(to_string(e.kind())), }, {"message", e.what()}}}};
    res.log += err.dump() + "\n";
  }
  res.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace cuspnorm::cli
