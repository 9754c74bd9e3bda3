#include "cuspnorm/hecke.hpp"

#include <algorithm>
#include <set>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/conjugation.hpp"
#include "cuspnorm/counting.hpp"
#include "cuspnorm/cusps.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm {

namespace {

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

std::vector<std::int64_t> units_one_mod(std::int64_t N, std::int64_t M) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= N; ++d) {
    if (arith::gcd(d, N) == 1 && (d - 1) % M == 0) out.push_back(d % N);
  }
  if (N == 1) out = {0};
  return out;
}

// Smallest (d r mod N, d s mod N) over the admissible units.
std::pair<std::int64_t, std::int64_t> row_class(std::int64_t r, std::int64_t s, std::int64_t N,
                                                const std::vector<std::int64_t>& units) {
  std::pair<std::int64_t, std::int64_t> best{N, N};
  for (std::int64_t d : units) best = std::min(best, {arith::mod(d * r, N), arith::mod(d * s, N)});
  return best;
}

// An SL2(Z) matrix with bottom row = (r, s) mod N.
Mat2 lift_bottom_row(std::int64_t r, std::int64_t s, std::int64_t N) {
  std::int64_t rr = r == 0 ? N : r;
  std::int64_t ss = s;
  while (arith::gcd(rr, ss) != 1) ss += N;
  auto eg = arith::ext_gcd(ss, rr);  // ss x + rr y = 1
  // p ss - q rr = 1 with p = x, q = -y
  return make_mat(eg.x, -eg.y, rr, ss);
}

void require_M_divides(std::int64_t N, std::int64_t M) {
  if (N < 1 || M < 1) throw Error(ErrorKind::InvalidArgument, "N and M must be >= 1");
  if (N % M != 0) throw Error(ErrorKind::InvalidM, "M must divide N");
}

std::uint64_t next_u64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t uniform(std::uint64_t& state, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(next_u64(state) % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

std::vector<Mat2> hnf_reps(std::int64_t l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
  std::vector<Mat2> out;
  for (std::int64_t a : arith::divisors(l)) {
    const std::int64_t d = l / a;
    for (std::int64_t b = 0; b < d; ++b) out.push_back(make_mat(a, b, 0, d));
  }
  return out;
}

Mat2 hnf_of(const Mat2& g) {
  const Integer det = g.det();
  if (sgn(det) <= 0) throw Error(ErrorKind::InvalidArgument, "hnf_of requires det > 0");
  // Row operations: (x y; -c/e a/e) sends the first column (a, c) to (e, 0).
  Integer e, x, y;
  mpz_gcdext(e.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), g.a.get_mpz_t(), g.c.get_mpz_t());
  const Mat2 left{x, y, Integer(-g.c / e), Integer(g.a / e)};
  Mat2 h = left * g;
  if (sgn(h.a) < 0) h = -h;
  const Integer k = floor_div(h.b, h.d);
  h.b -= k * h.d;
  return h;
}

CosetTable coset_reps_delta(std::int64_t l, std::int64_t N, std::int64_t M) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
  require_M_divides(N, M);
  CosetTable t;
  t.l = l;
  t.N = N;
  t.M = M;
  t.method = "pairs: bottom rows mod N up to units = 1 mod M, times hnf_reps(l)";
  const auto units = units_one_mod(N, M);
  const auto hs = hnf_reps(l);
  for (std::int64_t r = 0; r < N; ++r) {
    for (std::int64_t s = 0; s < N; ++s) {
      if (arith::gcd(arith::gcd(r, s), N) != 1) continue;
      if (row_class(r, s, N, units) != std::pair{r, s}) continue;
      ++t.bottom_row_classes;
      const Mat2 u = lift_bottom_row(r, s, N);
      for (const Mat2& h : hs) {
        Mat2 g = u * h;
        if (in_delta(g, l, N, M)) t.reps.push_back(std::move(g));
      }
    }
  }
  return t;
}

bool same_coset(const Mat2& g1, const Mat2& g2, std::int64_t N, std::int64_t M) {
  const Integer det = g1.det();
  if (det != g2.det() || sgn(det) == 0) return false;
  const Mat2 p = g2 * g1.adjugate();
  for (const Integer* e : {&p.a, &p.b, &p.c, &p.d}) {
    if (cuspnorm::mod(*e, det) != 0) return false;
  }
  const Mat2 q{Integer(p.a / det), Integer(p.b / det), Integer(p.c / det), Integer(p.d / det)};
  return in_gamma0_NM(q, N, M);
}

std::tuple<std::int64_t, std::int64_t, Mat2> coset_key(const Mat2& g, std::int64_t N, std::int64_t M) {
  const Mat2 h = hnf_of(g);
  // u = g h^-1 = g adj(h) / det
  const Integer det = g.det();
  const Mat2 p = g * h.adjugate();
  const Mat2 u{Integer(p.a / det), Integer(p.b / det), Integer(p.c / det), Integer(p.d / det)};
  const Integer n = big(N);
  auto cls = row_class(to_int64(cuspnorm::mod(u.c, n)), to_int64(cuspnorm::mod(u.d, n)), N, units_one_mod(N, M));
  return {cls.first, cls.second, h};
}

CosetCountVerdict coset_count_invariance(std::int64_t l, std::int64_t N, std::int64_t M) {
  CosetCountVerdict v;
  v.count_NM = static_cast<std::int64_t>(coset_reps_delta(l, N, M).reps.size());
  v.count_N = static_cast<std::int64_t>(coset_reps_delta(l, N, 1).reps.size());
  v.equal = v.count_NM == v.count_N;
  return v;
}

Mat2 random_gamma0_NM(std::int64_t N, std::int64_t M, std::uint64_t& state, std::int64_t spread) {
  for (;;) {
    const std::int64_t a = 1 + M * uniform(state, -spread, spread);
    const std::int64_t c = N * uniform(state, -spread, spread);
    if (arith::gcd(a, c) != 1) continue;
    auto eg = arith::ext_gcd(a, c);  // a x + c y = 1
    // (a b; c d) with a d - b c = 1: d = x, b = -y
    Mat2 g = make_mat(a, -eg.y, c, eg.x);
    g = g * gens::T(big(uniform(state, -spread, spread)));
    // Left factors (1 0; Nk 1) keep a fixed and move c.
    g = Mat2{Integer(1), Integer(0), big(N * uniform(state, -3, 3)), Integer(1)} * g;
    return g;
  }
}

ConjugationVerdict conjugation_invariance(const Mat2& sigma, std::int64_t l, std::int64_t N, std::int64_t M,
                                          std::int64_t budget, std::uint64_t seed) {
  if (!is_sl2(sigma)) throw Error(ErrorKind::PrereqFailed, "sigma must lie in SL2(Z)");
  if (N < 1 || M < 1 || N % (M * M) != 0) throw Error(ErrorKind::PrereqFailed, "M^2 must divide N");
  if (cusp_denominator(sigma, N) != N / M) throw Error(ErrorKind::PrereqFailed, "C(sigma) must equal N/M");
  ConjugationVerdict v;
  v.hypothesis_met = (l - 1) % M == 0;
  if (!v.hypothesis_met) v.note = "l is not 1 mod M; the invariance is not asserted in this case";
  const Mat2 sigma_inv = inverse_sl2(sigma);
  auto test = [&](const Mat2& g) {
    ++v.checked;
    if (!in_delta(sigma * g * sigma_inv, l, N, M) || !in_delta(sigma_inv * g * sigma, l, N, M)) {
      v.witness = g;
      return false;
    }
    return true;
  };
  const CosetTable table = coset_reps_delta(l, N, M);
  for (const Mat2& g : table.reps) {
    if (!test(g)) return v;
  }
  std::uint64_t state = seed;
  for (std::int64_t i = 0; i < budget && !table.reps.empty(); ++i) {
    const Mat2& rep = table.reps[static_cast<std::size_t>(uniform(state, 0, static_cast<std::int64_t>(table.reps.size()) - 1))];
    if (!test(random_gamma0_NM(N, M, state) * rep)) return v;
  }
  v.pass = true;
  return v;
}

bool conjugated_reps_valid(const Mat2& sigma, const CosetTable& table) {
  const Mat2 sigma_inv = inverse_sl2(sigma);
  std::set<std::tuple<std::int64_t, std::int64_t, Mat2>, bool (*)(const std::tuple<std::int64_t, std::int64_t, Mat2>&,
                                                                   const std::tuple<std::int64_t, std::int64_t, Mat2>&)>
      keys([](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
        if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
        return lex_cadb_less(std::get<2>(x), std::get<2>(y));
      });
  for (const Mat2& g : table.reps) {
    const Mat2 conj = sigma * g * sigma_inv;
    if (!in_delta(conj, table.l, table.N, table.M)) return false;
    if (!keys.insert(coset_key(conj, table.N, table.M)).second) return false;
  }
  // Pairwise inequivalent and as many as the coset count, hence complete.
  return keys.size() == table.reps.size();
}

}  // namespace cuspnorm
