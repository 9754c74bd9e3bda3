#include "cuspnorm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm {

namespace {

constexpr Lemma kLemmas[] = {Lemma::Eq1, Lemma::Eq2, Lemma::Eq3, Lemma::Eq4, Lemma::Eq5,
                             Lemma::Eq6, Lemma::Eq7, Lemma::Para, Lemma::Ampl};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

std::int64_t icbrt_ceil(std::int64_t n) {
  std::int64_t r = 1;
  while (r * r * r < n) ++r;
  return r;
}

std::int64_t isqrt_ceil(std::int64_t n) {
  std::int64_t r = to_int64(isqrt(big(n)));
  return r * r < n ? r + 1 : r;
}

std::vector<std::int64_t> primes_one_mod(std::int64_t L, std::int64_t M) {
  std::vector<std::int64_t> out;
  for (std::int64_t p : arith::primes_up_to(L)) {
    if (p % M == 1 % M) out.push_back(p);
  }
  return out;
}

// Counts for one point, shared between the l values of a cell.
class CountCache {
 public:
  CountCache(const PointH& z, const Rational& delta, std::int64_t N, std::int64_t M, const EnumerationLimits& lim)
      : z_(z), delta_(delta), N_(N), M_(M), lim_(lim) {}

  const CountReport& at(std::int64_t l) {
    auto it = cache_.find(l);
    if (it == cache_.end()) it = cache_.emplace(l, classify_counts(z_, l, delta_, N_, M_, false, lim_)).first;
    return it->second;
  }

 private:
  PointH z_;
  Rational delta_;
  std::int64_t N_, M_;
  EnumerationLimits lim_;
  std::map<std::int64_t, CountReport> cache_;
};

}  // namespace

const char* to_string(Lemma k) {
  switch (k) {
    case Lemma::Eq1: return "eq1";
    case Lemma::Eq2: return "eq2";
    case Lemma::Eq3: return "eq3";
    case Lemma::Eq4: return "eq4";
    case Lemma::Eq5: return "eq5";
    case Lemma::Eq6: return "eq6";
    case Lemma::Eq7: return "eq7";
    case Lemma::Para: return "para";
    case Lemma::Ampl: return "ampl";
  }
  return "?";
}

Lemma parse_lemma(std::string_view name) {
  for (Lemma k : kLemmas) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::ConfigError, "unknown lemma '" + std::string(name) + "' (expected eq1..eq7, para or ampl)");
}

std::vector<Lemma> all_lemmas() { return {std::begin(kLemmas), std::end(kLemmas)}; }

std::pair<std::int64_t, std::int64_t> parse_level_range(std::string_view text) {
  auto parse_one = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::ConfigError, "malformed level range '" + std::string(text) + "'");
    }
    return v;
  };
  auto dots = text.find("..");
  std::int64_t lo, hi;
  if (dots == std::string_view::npos) {
    lo = hi = parse_one(text);
  } else {
    lo = parse_one(text.substr(0, dots));
    hi = parse_one(text.substr(dots + 2));
  }
  if (lo < 1 || hi < lo) throw Error(ErrorKind::ConfigError, "level range must satisfy 1 <= A <= B");
  return {lo, hi};
}

void validate(const HarnessConfig& cfg) {
  if (cfg.N_lo < 1 || cfg.N_hi < cfg.N_lo) throw Error(ErrorKind::ConfigError, "level range must satisfy 1 <= A <= B");
  if (cfg.N_hi > 1'000'000) throw Error(ErrorKind::ConfigError, "levels above 10^6 are not supported");
  if (cfg.samples < 1) throw Error(ErrorKind::ConfigError, "samples must be >= 1");
  if (cfg.jobs < 1) throw Error(ErrorKind::ConfigError, "jobs must be >= 1");
  if (cfg.max_attempts < 1) throw Error(ErrorKind::ConfigError, "max_attempts must be >= 1");
  if (sgn(cfg.delta) < 0) throw Error(ErrorKind::ConfigError, "delta must be >= 0");
  if (cfg.M && *cfg.M < 1) throw Error(ErrorKind::ConfigError, "M must be >= 1");
  if (cfg.L && *cfg.L < 1) throw Error(ErrorKind::ConfigError, "L must be >= 1");
}

std::vector<std::int64_t> harness_L_values(Lemma lemma, std::int64_t N, std::int64_t M,
                                           const std::optional<std::int64_t>& fixed) {
  std::vector<std::int64_t> out;
  if (lemma == Lemma::Para) {
    const std::int64_t top = fixed.value_or(49);
    for (std::int64_t l = 1; l <= top; ++l) {
      if (l % M == 1 % M) out.push_back(l);
    }
    return out;
  }
  const bool square_lower = lemma == Lemma::Eq1 || lemma == Lemma::Eq2 || lemma == Lemma::Eq3 || lemma == Lemma::Ampl;
  const std::int64_t lower = square_lower ? M * M : M;
  if (fixed) {
    if (*fixed >= lower) out.push_back(*fixed);
    return out;
  }
  const std::int64_t c = icbrt_ceil(N);
  if (lemma == Lemma::Ampl) {
    for (std::int64_t L : {c, 2 * c}) {
      if (L >= lower) out.push_back(L);
    }
    return out;
  }
  const std::int64_t base = std::max(lower, c);
  return {base, 2 * base};
}

std::vector<PointH> sample_points(Lemma lemma, std::int64_t N, std::int64_t M, int count, std::uint64_t seed,
                                  int max_attempts) {
  std::mt19937_64 eng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(N) * 1315423911ULL +
                                                   static_cast<std::uint64_t>(M) * 2654435761ULL +
                                                   static_cast<std::uint64_t>(lemma))));
  const std::int64_t Q = 16 * N;
  // (k/Q)^2 >= 3 M^4 / (4 N^2)  <=>  k^2 >= 192 M^4
  const std::int64_t kmin = isqrt_ceil(192 * M * M * M * M);
  // ampl: (k/Q)^2 <= 1/N  <=>  k^2 <= 256 N
  const std::int64_t kmax = lemma == Lemma::Ampl ? to_int64(isqrt(big(256 * N))) : 2 * Q;
  std::vector<PointH> out;
  if (kmin > kmax) return out;
  auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
  auto below = [&](std::uint64_t n) { return eng() % n; };
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      const double ratio = static_cast<double>(kmax) / static_cast<double>(kmin);
      auto k = static_cast<std::int64_t>(std::llround(static_cast<double>(kmin) * std::pow(ratio, unit())));
      k = std::clamp(k, kmin, kmax);
      const auto j = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(Q + 1))) - Q / 2;
      PointH z(frac(big(j), big(Q)), frac(big(k), big(Q)));
      if (is_in_G(z, N, M)) {
        out.push_back(z);
        break;
      }
    }
  }
  return out;
}

HarnessRow evaluate_cell(Lemma lemma, std::int64_t N, std::int64_t M, std::int64_t L, const PointH& z,
                         const Rational& delta, const EnumerationLimits& limits) {
  init_real_precision();
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  HarnessRow row;
  row.lemma = lemma;
  row.N = N;
  row.M = M;
  row.L = L;
  row.delta = delta;
  row.z = z;
  CountCache cache(z, delta, N, M, limits);
  const Real n(N), m(M), ell(L), y = to_real(z.y), rn = sqrt(n);
  Integer lhs = 0;
  auto one_mod = [&](std::int64_t l) { return l % M == 1 % M; };
  switch (lemma) {
    case Lemma::Eq1:
      for (std::int64_t l = 1; l <= L; ++l) {
        if (one_mod(l)) lhs += big(cache.at(l).n_star);
      }
      row.rhs = ell / (m * n * y) + pow(ell, Real(3) / 2) / (m * m * rn) + ell * ell / (m * m * n);
      break;
    case Lemma::Eq2:
      for (std::int64_t l = 1; l <= L; ++l) {
        if (one_mod(l)) lhs += big(cache.at(l * l).n_star);
      }
      row.rhs = ell / (n * y) + ell * ell / (m * rn) + ell * ell * ell / (m * n);
      break;
    case Lemma::Eq3: {
      const std::int64_t l1 = M + 1;  // smallest l1 > 1 with l1 = 1 mod M
      for (std::int64_t l2 = 1; l2 <= L; ++l2) {
        if (one_mod(l2)) lhs += big(cache.at(l1 * l2 * l2).n_star);
      }
      row.rhs = pow(ell, Real(3) / 2) / (n * y) + pow(ell, 3) / (m * rn) + pow(ell, Real(9) / 2) / (m * n);
      break;
    }
    case Lemma::Eq4:
    case Lemma::Eq5:
    case Lemma::Eq6: {
      const auto primes = primes_one_mod(L, M);
      for (std::int64_t p : primes) {
        for (std::int64_t q : primes) {
          std::int64_t l = lemma == Lemma::Eq4 ? p * q : lemma == Lemma::Eq5 ? p * q * q : p * p * q * q;
          lhs += big(cache.at(l).n_u);
        }
      }
      if (lemma == Lemma::Eq4) {
        row.rhs = ell / m + ell * ell * y * rn / (m * m) + pow(ell, 3) * y / (m * m);
      } else if (lemma == Lemma::Eq5) {
        row.rhs = ell / m + pow(ell, Real(5) / 2) * y * rn / (m * m) + pow(ell, 4) * y / (m * m);
      } else {
        row.rhs = 1 + ell * ell * y * rn / m + pow(ell, 4) * y / m;
      }
      break;
    }
    case Lemma::Eq7:
      for (std::int64_t l = 1; l <= L; ++l) {
        if (one_mod(l)) lhs += big(cache.at(l).n_u);
      }
      row.rhs = 1 + sqrt(ell) * y * rn / m + ell * y / m;
      break;
    case Lemma::Para: {
      const Real n0(arith::squarefree_split(N).square_root);
      lhs = big(cache.at(L).n_p);
      for (const auto& cert : parabolic_certify(z, L, delta, N, M)) {
        if (!cert.ok()) ++row.certificate_violations;
      }
      const Real root = sqrt(ell);
      row.rhs = 1 + root * y * n0 / m + root * n0 / n;
      break;
    }
    case Lemma::Ampl: {
      AmplifiedSum s = amplified_count_sum(z, L, delta, N, M, limits);
      row.lhs = s.value;
      row.rhs = bound_rhs_ampl(N, M, L, z.y);
      row.ratio = row.lhs / row.rhs;
      return row;
    }
  }
  row.lhs_exact = lhs;
  row.lhs = to_real(lhs);
  row.ratio = row.lhs / row.rhs;
  return row;
}

HarnessResult run_harness(const HarnessConfig& cfg) {
  validate(cfg);
  init_real_precision();
  HarnessResult result;
  result.config = cfg;

  struct Cell {
    std::int64_t N, M, L;
    int sample;
    PointH z;
  };
  std::vector<Cell> cells;
  for (std::int64_t N = cfg.N_lo; N <= cfg.N_hi; ++N) {
    std::vector<std::int64_t> Ms;
    if (cfg.M) {
      if (N % (*cfg.M * *cfg.M) == 0) {
        Ms.push_back(*cfg.M);
      } else {
        result.skipped.push_back({N, *cfg.M, "M^2 does not divide N"});
      }
    } else {
      for (std::int64_t M : arith::divisors(arith::squarefree_split(N).square_root)) Ms.push_back(M);
    }
    for (std::int64_t M : Ms) {
      const auto Ls = harness_L_values(cfg.lemma, N, M, cfg.L);
      if (Ls.empty()) {
        result.skipped.push_back({N, M, "no admissible L"});
        continue;
      }
      const auto points = sample_points(cfg.lemma, N, M, cfg.samples, cfg.seed, cfg.max_attempts);
      if (points.empty()) {
        result.skipped.push_back({N, M, "no sampled point in G(N;M)"});
        continue;
      }
      for (std::int64_t L : Ls) {
        for (std::size_t s = 0; s < points.size(); ++s) cells.push_back({N, M, L, static_cast<int>(s), points[s]});
      }
    }
  }

  std::vector<std::optional<HarnessRow>> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        const Cell& c = cells[i];
        HarnessRow r = evaluate_cell(cfg.lemma, c.N, c.M, c.L, c.z, cfg.delta, cfg.limits);
        r.sample = c.sample;
        rows[i] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells.size());
        return;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(1, cells.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.max_ratio = 0;
  for (auto& r : rows) {
    result.certificate_violations += r->certificate_violations;
    if (!result.argmax || r->ratio > result.max_ratio) {
      result.argmax = result.rows.size();
      result.max_ratio = r->ratio;
    }
    result.rows.push_back(std::move(*r));
  }
  return result;
}

}  // namespace cuspnorm
