#include "cuspnorm/json_io.hpp"

#include <sstream>

#include "cuspnorm/error.hpp"

namespace cuspnorm::json_io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, "json: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::int64_t i64(const json& j, const char* key) { return to_int64(integer_from_json(field(j, key))); }

Real real_from_json(const json& j) {
  if (!j.is_string()) bad("real must be a string");
  init_real_precision();
  try {
    return Real(j.get<std::string>());
  } catch (const std::exception&) {
    bad("malformed real '" + j.get<std::string>() + "'");
  }
}

json matq_json(const Mat2Q& m) {
  return json::array({json::array({to_json(m.a), to_json(m.b)}), json::array({to_json(m.c), to_json(m.d)})});
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::object();
  for (const auto& c : checks) out[c.name] = c.ok;
  return out;
}

json al_json(const AtkinLehnerOp& al) {
  return {{"S", al.S}, {"N_S", al.N_S}, {"W", to_json(al.W)}};
}

AtkinLehnerOp al_from_json(const json& j) {
  AtkinLehnerOp al;
  al.S = field(j, "S").get<std::vector<std::int64_t>>();
  al.N_S = i64(j, "N_S");
  al.W = mat_from_json(field(j, "W"));
  return al;
}

}  // namespace

json to_json(const Integer& n) {
  if (fits_int64(n)) return to_int64(n);
  return n.get_str();
}

json to_json(const Rational& q) { return to_string(q); }
json to_json(const Real& r) { return format_real(r); }

json to_json(const Mat2& m) {
  return json::array({json::array({to_json(m.a), to_json(m.b)}), json::array({to_json(m.c), to_json(m.d)})});
}

json to_json(const PointH& z) { return {{"x", to_json(z.x)}, {"y", to_json(z.y)}}; }

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  bad("expected an integer");
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  bad("expected a rational");
}

Mat2 mat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2) {
    bad("matrix must be [[a,b],[c,d]]");
  }
  return {integer_from_json(j[0][0]), integer_from_json(j[0][1]), integer_from_json(j[1][0]),
          integer_from_json(j[1][1])};
}

PointH point_from_json(const json& j) {
  Rational y = rational_from_json(field(j, "y"));
  if (sgn(y) <= 0) bad("point needs y > 0");
  return {rational_from_json(field(j, "x")), y};
}

// ---- cusps -------------------------------------------------------------------

json cusps_to_json(std::int64_t N, const std::vector<CuspClass>& cusps) {
  json list = json::array();
  for (const auto& c : cusps) {
    list.push_back({{"a", c.a}, {"c", c.c}, {"denominator", c.denominator}, {"width", c.width},
                    {"tau", to_json(c.tau)}});
  }
  return {{"level", N}, {"count", cusps.size()}, {"count_formula", cusp_count_formula(N)}, {"cusps", list}};
}

std::vector<CuspClass> cusps_from_json(const json& j) {
  std::vector<CuspClass> out;
  for (const auto& e : field(j, "cusps")) {
    CuspClass c;
    c.a = i64(e, "a");
    c.c = i64(e, "c");
    c.denominator = i64(e, "denominator");
    c.width = i64(e, "width");
    c.tau = mat_from_json(field(e, "tau"));
    out.push_back(c);
  }
  return out;
}

// ---- reductions --------------------------------------------------------------

json to_json(const GapVerdict& g) {
  return {{"pass", g.pass}, {"worst_c", to_json(g.worst_c)}, {"worst_d", to_json(g.worst_d)},
          {"lhs", to_json(g.lhs)}, {"rhs", to_json(g.rhs)}, {"ratio", to_json(g.ratio)},
          {"pairs_checked", g.pairs_checked}};
}

GapVerdict gap_from_json(const json& j) {
  GapVerdict g;
  g.pass = field(j, "pass").get<bool>();
  g.worst_c = integer_from_json(field(j, "worst_c"));
  g.worst_d = integer_from_json(field(j, "worst_d"));
  g.lhs = rational_from_json(field(j, "lhs"));
  g.rhs = rational_from_json(field(j, "rhs"));
  g.ratio = rational_from_json(field(j, "ratio"));
  g.pairs_checked = i64(j, "pairs_checked");
  return g;
}

json to_json(const ReductionCertificate& r) {
  return {{"level", r.N}, {"tau", to_json(r.tau)}, {"atkin_lehner", al_json(r.al)}, {"M1", r.M1}, {"M", r.M},
          {"u", to_json(r.u)}, {"n", matq_json(r.n)}, {"sigma", to_json(r.sigma)},
          {"used_fallback", r.used_fallback}, {"checks", checks_json(r.checks)}, {"all_ok", r.all_ok()}};
}

json to_json(const GapReduction& r) {
  json j;
  j["level"] = r.N;
  j["z"] = to_json(r.z);
  j["z0"] = to_json(r.z0);
  j["tau"] = to_json(r.tau);
  j["method"] = r.method;
  j["atkin_lehner"] = al_json(r.al);
  j["sigma"] = to_json(r.sigma);
  j["M"] = r.M;
  j["z_prime"] = to_json(r.z_prime);
  j["gap"] = to_json(r.gap);
  j["candidates_scanned"] = r.candidates_scanned;
  j["checks"] = checks_json(r.checks);
  j["all_ok"] = r.all_ok();
  j["construction"] = to_json(r.construction);
  j["construction_z_prime"] = to_json(r.construction_z_prime);
  j["construction_gap"] = to_json(r.construction_gap);
  j["corrected_gap"] = to_json(r.corrected_gap);
  return j;
}

GapReduction reduction_from_json(const json& j) {
  GapReduction r;
  r.N = i64(j, "level");
  r.z = point_from_json(field(j, "z"));
  r.z0 = point_from_json(field(j, "z0"));
  r.tau = mat_from_json(field(j, "tau"));
  r.method = field(j, "method").get<std::string>();
  r.al = al_from_json(field(j, "atkin_lehner"));
  r.sigma = mat_from_json(field(j, "sigma"));
  r.M = i64(j, "M");
  r.z_prime = point_from_json(field(j, "z_prime"));
  r.gap = gap_from_json(field(j, "gap"));
  r.candidates_scanned = i64(j, "candidates_scanned");
  for (const auto& [name, ok] : field(j, "checks").items()) r.checks.push_back({name, ok.get<bool>()});
  r.construction_z_prime = point_from_json(field(j, "construction_z_prime"));
  r.construction_gap = gap_from_json(field(j, "construction_gap"));
  r.corrected_gap = gap_from_json(field(j, "corrected_gap"));
  return r;
}

// ---- counts ------------------------------------------------------------------

json to_json(const ParabolicCertificate& p) {
  return {{"gamma", to_json(p.gamma)}, {"m", p.m}, {"sign", p.sign}, {"scalar", p.scalar},
          {"fixed_at_infinity", p.fixed_at_infinity}, {"fixed_point", to_json(p.fixed_point)},
          {"tau", to_json(p.tau)}, {"gamma_prime", to_json(p.gamma_prime)}, {"t", to_json(p.t)},
          {"t0", to_json(p.t0)}, {"t1", to_json(p.t1)}, {"c_tau", to_json(p.c_tau)}, {"d_tau", to_json(p.d_tau)},
          {"u", to_json(p.u)}, {"divisibility_ok", p.divisibility_ok}, {"claim_ok", p.claim_ok},
          {"paraeq_ok", p.paraeq_ok}};
}

json to_json(const CountReport& r) {
  auto mats = [](const std::vector<Mat2>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(to_json(m));
    return a;
  };
  json j = {{"level", r.N}, {"M", r.M}, {"l", r.l}, {"delta", to_json(r.delta)}, {"z", to_json(r.z)},
            {"n_star", r.n_star}, {"n_u", r.n_u}, {"n_p", r.n_p}, {"total", r.total()}};
  j["matrices"] = {{"star", mats(r.star)}, {"unipotent", mats(r.unipotent)}, {"parabolic", mats(r.parabolic)}};
  return j;
}

CountReport count_from_json(const json& j) {
  CountReport r;
  r.N = i64(j, "level");
  r.M = i64(j, "M");
  r.l = i64(j, "l");
  r.delta = rational_from_json(field(j, "delta"));
  r.z = point_from_json(field(j, "z"));
  r.n_star = i64(j, "n_star");
  r.n_u = i64(j, "n_u");
  r.n_p = i64(j, "n_p");
  if (j.contains("matrices")) {
    const json& m = j.at("matrices");
    for (const auto& e : field(m, "star")) r.star.push_back(mat_from_json(e));
    for (const auto& e : field(m, "unipotent")) r.unipotent.push_back(mat_from_json(e));
    for (const auto& e : field(m, "parabolic")) r.parabolic.push_back(mat_from_json(e));
  }
  return r;
}

// ---- hecke -------------------------------------------------------------------

json to_json(const CosetTable& t) {
  json reps = json::array();
  for (const auto& m : t.reps) reps.push_back(to_json(m));
  return {{"l", t.l}, {"level", t.N}, {"M", t.M}, {"count", t.reps.size()}, {"method", t.method},
          {"bottom_row_classes", t.bottom_row_classes}, {"reps", reps}};
}

CosetTable coset_table_from_json(const json& j) {
  CosetTable t;
  t.l = i64(j, "l");
  t.N = i64(j, "level");
  t.M = i64(j, "M");
  t.method = field(j, "method").get<std::string>();
  t.bottom_row_classes = i64(j, "bottom_row_classes");
  for (const auto& e : field(j, "reps")) t.reps.push_back(mat_from_json(e));
  return t;
}

json to_json(const ConjugationVerdict& v) {
  json j = {{"pass", v.pass}, {"checked", v.checked}, {"hypothesis_met", v.hypothesis_met}, {"note", v.note}};
  j["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  return j;
}

// ---- harness -----------------------------------------------------------------

json to_json(const HarnessRow& r) {
  json j = {{"lemma", to_string(r.lemma)}, {"N", r.N}, {"M", r.M}, {"L", r.L}, {"sample", r.sample},
            {"delta", to_json(r.delta)}, {"z", to_json(r.z)}};
  j["lhs_exact"] = r.lhs_exact ? to_json(*r.lhs_exact) : json(nullptr);
  j["lhs"] = to_json(r.lhs);
  j["rhs"] = to_json(r.rhs);
  j["ratio"] = to_json(r.ratio);
  j["certificate_violations"] = r.certificate_violations;
  return j;
}

HarnessRow harness_row_from_json(const json& j) {
  HarnessRow r;
  r.lemma = parse_lemma(field(j, "lemma").get<std::string>());
  r.N = i64(j, "N");
  r.M = i64(j, "M");
  r.L = i64(j, "L");
  r.sample = static_cast<int>(i64(j, "sample"));
  r.delta = rational_from_json(field(j, "delta"));
  r.z = point_from_json(field(j, "z"));
  if (!field(j, "lhs_exact").is_null()) r.lhs_exact = integer_from_json(j.at("lhs_exact"));
  r.lhs = real_from_json(field(j, "lhs"));
  r.rhs = real_from_json(field(j, "rhs"));
  r.ratio = real_from_json(field(j, "ratio"));
  r.certificate_violations = i64(j, "certificate_violations");
  return r;
}

json to_json(const HarnessResult& r) {
  const HarnessConfig& c = r.config;
  json cfg = {{"lemma", to_string(c.lemma)}, {"levels", std::to_string(c.N_lo) + ".." + std::to_string(c.N_hi)},
              {"delta", to_json(c.delta)}, {"samples", c.samples}, {"seed", c.seed}};
  cfg["M"] = c.M ? json(*c.M) : json(nullptr);
  cfg["L"] = c.L ? json(*c.L) : json(nullptr);
  cfg["max_attempts"] = c.max_attempts;
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"N", s.N}, {"M", s.M}, {"reason", s.reason}});
  json j = {{"config", cfg}, {"row_count", r.rows.size()}};
  j["max_ratio"] = r.argmax ? to_json(r.max_ratio) : json(nullptr);
  j["argmax"] = r.argmax ? to_json(r.rows[*r.argmax]) : json(nullptr);
  j["certificate_violations"] = r.certificate_violations;
  j["skipped"] = skipped;
  j["rows"] = rows;
  return j;
}

HarnessResult harness_from_json(const json& j) {
  HarnessResult r;
  const json& cfg = field(j, "config");
  r.config.lemma = parse_lemma(field(cfg, "lemma").get<std::string>());
  std::tie(r.config.N_lo, r.config.N_hi) = parse_level_range(field(cfg, "levels").get<std::string>());
  r.config.delta = rational_from_json(field(cfg, "delta"));
  r.config.samples = static_cast<int>(i64(cfg, "samples"));
  r.config.seed = field(cfg, "seed").get<std::uint64_t>();
  if (!field(cfg, "M").is_null()) r.config.M = i64(cfg, "M");
  if (!field(cfg, "L").is_null()) r.config.L = i64(cfg, "L");
  r.config.max_attempts = static_cast<int>(i64(cfg, "max_attempts"));
  for (const auto& row : field(j, "rows")) r.rows.push_back(harness_row_from_json(row));
  for (const auto& s : field(j, "skipped")) r.skipped.push_back({i64(s, "N"), i64(s, "M"), s.at("reason").get<std::string>()});
  if (!field(j, "max_ratio").is_null()) {
    r.max_ratio = real_from_json(j.at("max_ratio"));
    const HarnessRow best = harness_row_from_json(field(j, "argmax"));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& x = r.rows[i];
      if (x.N == best.N && x.M == best.M && x.L == best.L && x.sample == best.sample) {
        r.argmax = i;
        break;
      }
    }
  }
  r.certificate_violations = i64(j, "certificate_violations");
  return r;
}

std::string harness_csv(const HarnessResult& r) {
  std::ostringstream os;
  os << kCsvVersionLine << "\n";
  os << "lemma,N,M,L_or_Lambda,delta,x,y,lhs,rhs,ratio\n";
  for (const auto& row : r.rows) {
    os << to_string(row.lemma) << ',' << row.N << ',' << row.M << ',' << row.L << ',' << to_string(row.delta)
       << ',' << to_string(row.z.x) << ',' << to_string(row.z.y) << ','
       << (row.lhs_exact ? to_string(*row.lhs_exact) : format_real(row.lhs)) << ',' << format_real(row.rhs) << ','
       << format_real(row.ratio) << '\n';
  }
  return os.str();
}

// ---- bounds ------------------------------------------------------------------

json to_json(const ExponentVector& v) {
  json j = json::object();
  for (int i = 0; i < kParams; ++i) j[to_string(static_cast<Param>(i))] = to_json(v.e[i]);
  return j;
}

ExponentVector exponent_from_json(const json& j) {
  ExponentVector v;
  for (int i = 0; i < kParams; ++i) v.e[i] = rational_from_json(field(j, to_string(static_cast<Param>(i))));
  return v;
}

json to_json(const PiecewiseLinear& f) {
  json a = json::array();
  for (const auto& [p, v] : f.knots) a.push_back(json::array({to_json(p), to_json(v)}));
  return a;
}

PiecewiseLinear pl_from_json(const json& j) {
  if (!j.is_array()) bad("piecewise-linear function must be a list of knots");
  PiecewiseLinear f;
  for (const auto& k : j) {
    if (!k.is_array() || k.size() != 2) bad("knot must be [nu, value]");
    f.knots.emplace_back(rational_from_json(k[0]), rational_from_json(k[1]));
  }
  return f;
}

json to_json(const DerivationReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"op", s.op}, {"input", s.input}, {"output", s.output}, {"certificate", s.certificate},
                     {"ok", s.ok}});
  }
  json maxima = json::array();
  for (const auto& [v, m] : r.amplification_maxima) {
    maxima.push_back({{"monomial", to_string(v)}, {"exponents", to_json(v)}, {"max_exponent", to_json(m)}});
  }
  json j;
  j["case"] = to_string(r.which);
  j["sup_norm_exponent"] = r.which == TheoremCase::Main ? to_json(r.worst_exponent) : json(r.exponent_text);
  j["worst_exponent"] = to_json(r.worst_exponent);
  j["exponent_by_nu"] = to_json(r.exponent);
  j["ok"] = r.ok;
  j["amplification_maxima"] = maxima;
  j["axioms"] = r.axioms;
  j["epsilon_note"] = r.epsilon_note;
  j["steps"] = steps;
  return j;
}

DerivationReport derivation_from_json(const json& j) {
  DerivationReport r;
  r.which = parse_theorem_case(field(j, "case").get<std::string>());
  r.worst_exponent = rational_from_json(field(j, "worst_exponent"));
  r.exponent = pl_from_json(field(j, "exponent_by_nu"));
  r.exponent_text = r.which == TheoremCase::Main ? to_string(r.worst_exponent)
                                                 : field(j, "sup_norm_exponent").get<std::string>();
  r.ok = field(j, "ok").get<bool>();
  for (const auto& m : field(j, "amplification_maxima")) {
    r.amplification_maxima.emplace_back(exponent_from_json(field(m, "exponents")),
                                        rational_from_json(field(m, "max_exponent")));
  }
  r.axioms = field(j, "axioms").get<std::vector<std::string>>();
  r.epsilon_note = field(j, "epsilon_note").get<std::string>();
  for (const auto& s : field(j, "steps")) {
    r.steps.push_back({field(s, "op").get<std::string>(), field(s, "input").get<std::string>(),
                       field(s, "output").get<std::string>(), field(s, "certificate").get<std::string>(),
                       field(s, "ok").get<bool>()});
  }
  return r;
}

}  // namespace cuspnorm::json_io
