#include "cuspnorm/counting.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/conjugation.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

// ---- scalar back-ends for the enumerator ------------------------------------

i128 to_i128(const Integer& v) {
  Integer a = v < 0 ? Integer(-v) : v;
  std::uint64_t limbs[2] = {0, 0};
  std::size_t count = 0;
  mpz_export(limbs, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  i128 r = static_cast<i128>((static_cast<u128>(limbs[1]) << 64) | limbs[0]);
  return v < 0 ? -r : r;
}

Integer from_i128(i128 v) {
  const bool neg = v < 0;
  u128 a = neg ? static_cast<u128>(-v) : static_cast<u128>(v);
  std::uint64_t limbs[2] = {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(a >> 64)};
  Integer r;
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
  return neg ? Integer(-r) : r;
}

i128 fdiv(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
i128 cdiv(i128 a, i128 b) { return -fdiv(-a, b); }

i128 isqrt128(i128 v) {
  u128 n = static_cast<u128>(v);
  u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<i128>(r);
}

struct I128Ops {
  using T = i128;
  static T from(const Integer& v) { return to_i128(v); }
  static Integer to(T v) { return from_i128(v); }
  static T floor_div(T a, T b) { return fdiv(a, b); }
  static T ceil_div(T a, T b) { return cdiv(a, b); }
  static T isqrt(T v) { return isqrt128(v); }
  static T mod(T a, T m) {
    T r = a % m;
    return r < 0 ? r + m : r;
  }
};

struct MpzOps {
  using T = Integer;
  static T from(const Integer& v) { return v; }
  static Integer to(const T& v) { return v; }
  static T floor_div(const T& a, const T& b) { return cuspnorm::floor_div(a, b); }
  static T ceil_div(const T& a, const T& b) { return cuspnorm::ceil_div(a, b); }
  static T isqrt(const T& v) { return cuspnorm::isqrt(v); }
  static T mod(const T& a, const T& m) { return cuspnorm::mod(a, m); }
};

// x = X/D, y = Y/D, delta = dn/dd.
struct Window {
  Integer X, Y, D, dn, dd, l, N, M;
};

Window make_window(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N, std::int64_t M) {
  Window w;
  w.D = lcm(z.x.get_den(), z.y.get_den());
  w.X = z.x.get_num() * (w.D / z.x.get_den());
  w.Y = z.y.get_num() * (w.D / z.y.get_den());
  w.dn = delta.get_num();
  w.dd = delta.get_den();
  w.l = big(l);
  w.N = big(N);
  w.M = big(M);
  return w;
}

// Im(gamma z) >= y/K with K = 1 + 2 delta + 2 sqrt(delta^2 + delta) < 2 + 4 delta,
// and |cz + d|^2 = l y / Im(gamma z), so c^2 y^2 <= l (2 + 4 delta).
// u(gamma z, z) <= delta is |-cz^2 + (a-d)z + b|^2 <= 4 l delta y^2; its imaginary
// part bounds t = a - d and its real part then bounds b. a, d follow from
// (a + d)^2 = t^2 + 4(l + bc).
template <class Ops, class Visit>
void enumerate_core(const Window& W, std::int64_t max_c_values, Visit&& visit) {
  using T = typename Ops::T;
  const T X = Ops::from(W.X), Y = Ops::from(W.Y), D = Ops::from(W.D);
  const T dn = Ops::from(W.dn), dd = Ops::from(W.dd), l = Ops::from(W.l);
  const T N = Ops::from(W.N), M = Ops::from(W.M);
  const T D2 = D * D, Y2 = Y * Y;
  const T cmax = Ops::isqrt(Ops::floor_div(l * (2 * dd + 4 * dn) * D2, Y2 * dd));
  const T kmax = cmax / N;
  if (2 * kmax + 1 > T(max_c_values)) {
    throw Error(ErrorKind::BudgetExceeded, "too many admissible lower-left entries; raise the budget or the height");
  }
  const T four_l_dn_D2 = 4 * l * dn * D2;
  const T E = Ops::isqrt(Ops::floor_div(four_l_dn_D2, dd));
  const T X2mY2 = X * X - Y2;
  const T top = four_l_dn_D2 * Y2;
  for (T k = -kmax; k <= kmax; ++k) {
    const T c = k * N;
    const T twocX = 2 * c * X;
    const T tlo = Ops::ceil_div(twocX - E, D), thi = Ops::floor_div(twocX + E, D);
    const T cR = -c * X2mY2;
    for (T t = tlo; t <= thi; ++t) {
      const T e = t * D - twocX;
      const T rem = top - Y2 * e * e * dd;
      if (rem < 0) continue;
      const T sr = Ops::isqrt(Ops::floor_div(rem, dd));
      const T R0 = cR + t * X * D;
      const T blo = Ops::ceil_div(-R0 - sr, D2), bhi = Ops::floor_div(-R0 + sr, D2);
      const T base = t * t + 4 * l;
      for (T b = blo; b <= bhi; ++b) {
        const T disc = base + 4 * b * c;
        if (disc < 0) continue;
        const T s = Ops::isqrt(disc);
        if (s * s != disc) continue;
        for (int sgn : {1, -1}) {
          if (sgn == -1 && s == 0) break;
          const T sum = sgn == 1 ? s : T(-s);
          const T a = (sum + t) / 2, d = (sum - t) / 2;
          if (Ops::mod(a - 1, M) != 0) continue;
          visit(Mat2{Ops::to(a), Ops::to(b), Ops::to(c), Ops::to(d)});
        }
      }
    }
  }
}

bool fits_i128_window(const Window& W) {
  // Every intermediate is bounded by a small multiple of these magnitudes.
  const Integer l = W.l;
  Integer D2 = W.D * W.D, Y2 = W.Y * W.Y;
  Integer q1 = 4 * l * (W.dn + W.dd) * D2 * (Y2 + 1) * W.dd;
  Integer cmax = isqrt(Integer(l * (2 * W.dd + 4 * W.dn) * D2 / (Y2 * W.dd))) + 1;
  Integer absX = W.X < 0 ? Integer(-W.X) : W.X;
  Integer tmax = (2 * cmax * absX + isqrt(q1) + 1) / W.D + 2;
  Integer q2 = cmax * (W.X * W.X + Y2) + tmax * absX * W.D + isqrt(q1) + 1;
  Integer q3 = tmax * tmax + 4 * l + 4 * cmax * (q2 / D2 + 2);
  Integer q4 = Y2 * tmax * tmax * D2 * W.dd;
  const Integer limit = Integer(1) << 120;
  return q1 < limit && q2 < limit && q3 < limit && q4 < limit && W.M < limit && W.N < limit;
}

template <class Visit>
void enumerate_any(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N, std::int64_t M,
                   const EnumerationLimits& limits, Visit&& visit) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
  if (N < 1 || M < 1) throw Error(ErrorKind::InvalidArgument, "N and M must be >= 1");
  if (sgn(delta) < 0) throw Error(ErrorKind::InvalidArgument, "delta must be >= 0");
  Window W = make_window(z, l, delta, N, M);
  if (fits_i128_window(W)) {
    enumerate_core<I128Ops>(W, limits.max_c_values, visit);
  } else {
    enumerate_core<MpzOps>(W, limits.max_c_values, visit);
  }
}

}  // namespace

bool in_delta(const Mat2& g, std::int64_t l, std::int64_t N, std::int64_t M) {
  return g.det() == big(l) && cuspnorm::mod(g.c, big(N)) == 0 && cuspnorm::mod(Integer(g.a - 1), big(M)) == 0;
}

bool is_in_G(const PointH& z, std::int64_t N, std::int64_t M) {
  const Integer M2 = big(M) * big(M);
  if (N % (M * M) != 0) throw Error(ErrorKind::InvalidM, "M^2 must divide N");
  if (z.y * z.y * 4 * big(N) * big(N) < 3 * M2 * M2) return false;
  return verify_gap_certificate(z, N, M).pass;
}

std::vector<Mat2> enumerate_delta_near(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N,
                                       std::int64_t M, const EnumerationLimits& limits) {
  std::vector<Mat2> out;
  enumerate_any(z, l, delta, N, M, limits, [&](Mat2 g) { out.push_back(std::move(g)); });
  std::sort(out.begin(), out.end(), lex_cadb_less);
  return out;
}

MatrixClass classify(const Mat2& g, std::int64_t l) {
  const Integer tr = g.trace();
  if (tr * tr == 4 * big(l)) return MatrixClass::Parabolic;
  return g.c != 0 ? MatrixClass::Star : MatrixClass::Unipotent;
}

const char* to_string(MatrixClass k) {
  switch (k) {
    case MatrixClass::Star: return "star";
    case MatrixClass::Unipotent: return "unipotent";
    case MatrixClass::Parabolic: return "parabolic";
  }
  return "?";
}

CountReport classify_counts(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N, std::int64_t M,
                            bool keep_matrices, const EnumerationLimits& limits) {
  CountReport r;
  r.z = z;
  r.l = l;
  r.delta = delta;
  r.N = N;
  r.M = M;
  for (Mat2& g : enumerate_delta_near(z, l, delta, N, M, limits)) {
    switch (classify(g, l)) {
      case MatrixClass::Star:
        ++r.n_star;
        if (keep_matrices) r.star.push_back(std::move(g));
        break;
      case MatrixClass::Unipotent:
        ++r.n_u;
        if (keep_matrices) r.unipotent.push_back(std::move(g));
        break;
      case MatrixClass::Parabolic:
        ++r.n_p;
        if (keep_matrices) r.parabolic.push_back(std::move(g));
        break;
    }
  }
  return r;
}

ParabolicCertificate certify_parabolic(const Mat2& gamma, const PointH& z, std::int64_t l, std::int64_t N,
                                       std::int64_t M) {
  if (classify(gamma, l) != MatrixClass::Parabolic || gamma.det() != big(l)) {
    throw Error(ErrorKind::InvalidArgument, "matrix is not parabolic of determinant l");
  }
  ParabolicCertificate cert;
  cert.gamma = gamma;
  Integer m;
  is_square(big(l), &m);
  cert.m = to_int64(m);
  cert.sign = sgn(gamma.trace()) > 0 ? 1 : -1;
  cert.scalar = gamma.b == 0 && gamma.c == 0;
  if (gamma.c == 0) {
    cert.fixed_at_infinity = true;
    cert.tau = Mat2::identity();
  } else {
    cert.fixed_point = frac(Integer(gamma.a - gamma.d), Integer(2 * gamma.c));
    const Integer p = cert.fixed_point.get_num(), q = cert.fixed_point.get_den();
    // p s - r q = 1
    Integer g, s, r;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    r = -r;
    cert.tau = {p, r, q, s};
  }
  const Mat2 tau_inv = inverse_sl2(cert.tau);
  cert.c_tau = tau_inv.c;
  cert.d_tau = tau_inv.d;
  cert.gamma_prime = tau_inv * gamma * cert.tau;
  const Mat2& gp = cert.gamma_prime;
  const Integer sm = cert.sign * m;
  if (gp.c != 0 || gp.a != sm || gp.d != sm) {
    throw Error(ErrorKind::InternalSolveFailure, "conjugate of a parabolic matrix is not upper triangular");
  }
  cert.t = cert.sign * gp.b;
  if (cert.t == 0) {
    cert.t0 = 0;
    cert.t1 = 1;
  } else {
    cert.t1 = arith::smooth_part(cert.t, N);
    cert.t0 = cert.t / cert.t1;
  }
  const Integer bigN = big(N), bigM = big(M);
  cert.divisibility_ok = cuspnorm::mod(Integer(cert.c_tau * cert.c_tau * cert.t), bigN) == 0;
  if (cert.t == 0) {
    cert.claim_ok = true;
  } else {
    const Integer N0 = big(arith::squarefree_split(N).square_root);
    const Integer g = cuspnorm::gcd(cert.c_tau, big(N / (M * M)));
    const Rational lhs = frac(Integer(cert.t0 * cert.t0 * bigM * bigM), Integer(N0 * N0));
    const Rational rhs = frac(Integer(cert.t * cert.t * pow(bigM, 4) * g * g), Integer(bigN * bigN));
    cert.claim_ok = lhs <= rhs;
  }
  cert.u = point_pair_u(mobius_act(gamma, z), z);
  const Rational w = cz_plus_d_norm2(Rational(cert.c_tau), Rational(cert.d_tau), z);
  const Rational predicted = Rational(cert.t * cert.t) * w * w / (4 * big(l) * z.y * z.y);
  cert.paraeq_ok = predicted == cert.u;
  return cert;
}

std::vector<ParabolicCertificate> parabolic_certify(const PointH& z, std::int64_t l, const Rational& delta,
                                                    std::int64_t N, std::int64_t M) {
  std::vector<ParabolicCertificate> out;
  if (l < 1 || !is_square(big(l))) return out;
  CountReport r = classify_counts(z, l, delta, N, M, true);
  for (const Mat2& g : r.parabolic) out.push_back(certify_parabolic(g, z, l, N, M));
  return out;
}

AmplifierWeights amplifier_weights(std::int64_t Lambda, std::int64_t M) {
  if (Lambda < 1 || M < 1) throw Error(ErrorKind::InvalidArgument, "Lambda and M must be >= 1");
  AmplifierWeights w;
  w.Lambda = Lambda;
  w.M = M;
  w.primes = arith::primes_in_progression(Lambda, M);
  w.weight[1] = frac(big(Lambda), big(M));
  for (std::int64_t p : w.primes) {
    for (std::int64_t q : w.primes) {
      for (std::int64_t l : {p, p * q, p * q * q, p * p * q * q}) w.weight[l] = Rational(1);
    }
  }
  return w;
}

AmplifiedSum amplified_count_sum(const PointH& z, std::int64_t Lambda, const Rational& delta, std::int64_t N,
                                 std::int64_t M, const EnumerationLimits& limits) {
  init_real_precision();
  AmplifiedSum s;
  s.weights = amplifier_weights(Lambda, M);
  if (s.weights.primes.empty()) s.warnings.push_back("no primes in (Lambda, 2 Lambda) congruent to 1 mod M");
  if (!is_in_G(z, N, M)) s.warnings.push_back("point is outside G(N;M)");
  s.value = 0;
  for (const auto& [l, y_l] : s.weights.weight) {
    AmplifiedTerm term{l, y_l, classify_counts(z, l, delta, N, M, false, limits)};
    s.value += to_real(y_l) * Real(term.counts.total()) / boost::multiprecision::sqrt(Real(l));
    s.terms.push_back(std::move(term));
  }
  return s;
}

Real bound_rhs_ampl(std::int64_t N, std::int64_t M, std::int64_t Lambda, const Rational& y) {
  if (N < 1 || M < 1 || Lambda < 1) throw Error(ErrorKind::InvalidArgument, "N, M and Lambda must be >= 1");
  if (N % (M * M) != 0) throw Error(ErrorKind::InvalidM, "M^2 must divide N");
  init_real_precision();
  using boost::multiprecision::sqrt;
  const Real n(N), m(M), L(Lambda);
  const Real n0(arith::squarefree_split(N).square_root);
  return L / m + L * L * to_real(y) * n0 / (m * m * m) + L * L * sqrt(L) / (m * m * sqrt(n)) +
         L * L * L * L / (m * n);
}

// ---- lattice utility --------------------------------------------------------

namespace {

Rational dot(const Vec2Q& u, const Vec2Q& v) { return u.x * v.x + u.y * v.y; }
Vec2Q sub(const Vec2Q& u, const Vec2Q& v) { return {u.x - v.x, u.y - v.y}; }
Vec2Q scale(const Integer& k, const Vec2Q& v) { return {k * v.x, k * v.y}; }
Rational cross(const Vec2Q& u, const Vec2Q& v) { return u.x * v.y - u.y * v.x; }

Integer nearest(const Rational& q) { return floor(Rational(q + Rational(1, 2))); }

void gauss_reduce(Vec2Q& b1, Vec2Q& b2) {
  if (dot(b1, b1) > dot(b2, b2)) std::swap(b1, b2);
  for (;;) {
    const Integer k = nearest(dot(b1, b2) / dot(b1, b1));
    b2 = sub(b2, scale(k, b1));
    if (dot(b2, b2) >= dot(b1, b1)) return;
    std::swap(b1, b2);
  }
}

Integer real_floor(const Real& v) {
  Integer r;
  mpfr_get_z(r.get_mpz_t(), v.backend().data(), MPFR_RNDD);
  return r;
}

// Integer interval {m : A m^2 + 2 B m + C <= 0}, A > 0; returns count.
std::int64_t quadratic_interval(const Rational& A, const Rational& B, const Rational& C) {
  auto f = [&](const Integer& m) { return A * m * m + 2 * B * m + C <= 0; };
  const Rational disc = B * B - A * C;
  if (sgn(disc) < 0) return 0;
  const Real root = boost::multiprecision::sqrt(to_real(disc));
  const Real a = to_real(A), b = to_real(B);
  Integer hi = real_floor(Real((-b + root) / a));
  Integer lo = Integer(real_floor(Real((-b - root) / a)) + 1);
  while (f(Integer(hi + 1))) ++hi;
  while (f(Integer(lo - 1))) --lo;
  while (lo <= hi && !f(hi)) --hi;
  while (lo <= hi && !f(lo)) ++lo;
  return hi < lo ? 0 : to_int64(Integer(hi - lo + 1));
}

}  // namespace

Rational shortest_vector_sq(Vec2Q b1, Vec2Q b2) {
  if (sgn(cross(b1, b2)) == 0) throw Error(ErrorKind::InvalidArgument, "lattice basis is degenerate");
  gauss_reduce(b1, b2);
  return dot(b1, b1);
}

LatticeDiscCount lattice_disc_count(const Vec2Q& b1_in, const Vec2Q& b2_in, const Vec2Q& centre, const Rational& R2) {
  if (sgn(cross(b1_in, b2_in)) == 0) throw Error(ErrorKind::InvalidArgument, "lattice basis is degenerate");
  if (sgn(R2) < 0) throw Error(ErrorKind::InvalidArgument, "radius must be non-negative");
  init_real_precision();
  Vec2Q b1 = b1_in, b2 = b2_in;
  gauss_reduce(b1, b2);
  LatticeDiscCount out;
  out.lambda1_sq = dot(b1, b1);
  out.covolume = abs(cross(b1, b2));
  // centre = alpha b1 + beta b2; the b2-coordinate n of any point in the disc
  // obeys (n - beta)^2 covolume^2 <= R2 |b1|^2.
  const Rational beta = cross(b1, centre) / cross(b1, b2);
  const Rational span = R2 * out.lambda1_sq / (out.covolume * out.covolume);
  auto n_ok = [&](const Integer& n) {
    Rational e = n - beta;
    return e * e <= span;
  };
  Integer n = floor(beta);
  std::int64_t count = 0;
  auto row = [&](const Integer& k) {
    const Vec2Q w = sub(scale(k, b2), centre);
    return quadratic_interval(out.lambda1_sq, dot(b1, w), dot(w, w) - R2);
  };
  for (Integer k = n; n_ok(k); --k) count += row(k);
  for (Integer k = n + 1; n_ok(k); ++k) count += row(k);
  out.count = count;
  using boost::multiprecision::sqrt;
  const Real R = sqrt(to_real(R2));
  out.envelope = 1 + R / sqrt(to_real(out.lambda1_sq)) + to_real(R2) / to_real(out.covolume);
  return out;
}

}  // namespace cuspnorm
