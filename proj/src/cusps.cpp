#include "cuspnorm/cusps.hpp"

#include <algorithm>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm {

namespace {

void require_sl2(const Mat2& tau) {
  if (!is_sl2(tau)) throw Error(ErrorKind::NotUnimodular, "expected a matrix of determinant 1");
}

void require_level(std::int64_t N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be >= 1");
}

// min(v_p(c), cap), with v_p(0) treated as infinite.
int capped_valuation(const Integer& c, std::int64_t p, int cap) {
  if (c == 0) return cap;
  return std::min(arith::valuation(c, p), cap);
}

}  // namespace

std::int64_t cusp_denominator(const Mat2& tau, std::int64_t N) {
  require_sl2(tau);
  require_level(N);
  return to_int64(gcd(tau.c, Integer(static_cast<long>(N))));
}

std::int64_t width_from_denominator(std::int64_t C, std::int64_t N) {
  return N / arith::gcd(C * C % N, N);
}

std::int64_t cusp_width(const Mat2& tau, std::int64_t N) {
  return width_from_denominator(cusp_denominator(tau, N), N);
}

std::vector<CuspClass> enumerate_cusps(std::int64_t N) {
  require_level(N);
  std::vector<CuspClass> out;
  for (std::int64_t c : arith::divisors(N)) {
    const std::int64_t g = arith::gcd(c, N / c);
    for (std::int64_t u = 0; u < g; ++u) {
      if (arith::gcd(u, g) != 1) continue;
      CuspClass cusp;
      cusp.denominator = c;
      cusp.width = width_from_denominator(c, N);
      if (c == N) {
        cusp.a = 1;
        cusp.c = 0;
        cusp.tau = Mat2::identity();
      } else {
        std::int64_t a = u;
        while (arith::gcd(a, c) != 1) a += g;
        cusp.a = a;
        cusp.c = c;
        auto [h, x, y] = arith::ext_gcd(a, c);
        (void)h;
        // a*x + c*y = 1, so (a -y; c x) has determinant 1.
        cusp.tau = make_mat(a, -y, c, x);
      }
      out.push_back(cusp);
    }
  }
  std::sort(out.begin(), out.end(), [](const CuspClass& x, const CuspClass& y) {
    if (x.denominator != y.denominator) return x.denominator < y.denominator;
    return x.a < y.a;
  });
  return out;
}

std::int64_t cusp_count_formula(std::int64_t N) {
  require_level(N);
  std::int64_t total = 0;
  for (std::int64_t c : arith::divisors(N)) total += arith::euler_phi(arith::gcd(c, N / c));
  return total;
}

LocalProfile local_profile(const Mat2& tau, std::int64_t N) {
  require_sl2(tau);
  require_level(N);
  LocalProfile out;
  for (const auto& [p, e] : arith::factor(N)) {
    LocalData d;
    d.p = p;
    d.n_p = e;
    d.c_p = capped_valuation(tau.c, p, e);
    d.w_p = std::max(e - 2 * d.c_p, 0);
    out.push_back(d);
  }
  return out;
}

bool is_p_integral(const Rational& q, std::int64_t p) {
  return q == 0 || arith::valuation(q, p) >= 0;
}

bool is_p_unit(const Rational& q, std::int64_t p) { return q != 0 && arith::valuation(q, p) == 0; }

NormalForm doublecoset_normal_form(const Mat2& tau, std::int64_t p, int n_p) {
  require_sl2(tau);
  if (!arith::is_prime(p) || n_p < 1) {
    throw Error(ErrorKind::InvalidArgument, "normal form needs a prime p and n_p >= 1");
  }
  const Rational a(tau.a), b(tau.b), c(tau.c), d(tau.d);
  const Integer pn = pow(Integer(static_cast<long>(p)), static_cast<unsigned long>(n_p));
  const int k = capped_valuation(tau.c, p, n_p);
  NormalForm nf;
  nf.c_p = k;
  if (k == 0) {
    nf.branch = 1;
    nf.k = Mat2Q(Rational(1), Rational((1 - a) / c), Rational(0), Rational(1 / c));
    nf.nu = Mat2Q(Rational(1), Rational((a * d - b * c - d) / c), Rational(0), Rational(1));
  } else if (k < n_p) {
    nf.branch = 2;
    Integer pk = pow(Integer(static_cast<long>(p)), static_cast<unsigned long>(k));
    Rational c1 = c / Rational(pk);
    nf.k = Mat2Q(Rational(1 / a), Rational(0), Rational(0), Rational(1 / c1));
    nf.nu = Mat2Q(Rational(1), Rational(-b / a), Rational(0), Rational(1));
  } else {
    nf.branch = 3;
    nf.k = Mat2Q(Rational(1 / a), Rational(0), Rational((Rational(pn) - c) / a), Rational(1));
    nf.nu = Mat2Q(Rational(1), Rational(-b / a), Rational(0), Rational(1));
  }
  nf.form = nf.k * to_rational(tau) * nf.nu;
  nf.v = nf.form.d;
  // v = num/den with den prime to p.
  Integer inv;
  Integer den = mod(nf.v.get_den(), pn);
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pn.get_mpz_t()) == 0) {
    throw Error(ErrorKind::InternalSolveFailure, "normal form corner is not a p-adic unit");
  }
  nf.v_residue = mod(Integer(nf.v.get_num() * inv), pn);
  return nf;
}

bool verify_normal_form(const Mat2& tau, std::int64_t p, int n_p, const NormalForm& nf) {
  const Integer pn = pow(Integer(static_cast<long>(p)), static_cast<unsigned long>(n_p));
  const Integer pc = pow(Integer(static_cast<long>(p)), static_cast<unsigned long>(nf.c_p));
  if (nf.k * to_rational(tau) * nf.nu != nf.form) return false;
  if (nf.form != Mat2Q(Rational(1), Rational(0), Rational(pc), nf.v)) return false;
  if (!is_p_unit(nf.v, p)) return false;
  for (const Rational* e : {&nf.k.a, &nf.k.b, &nf.k.c, &nf.k.d}) {
    if (!is_p_integral(*e, p)) return false;
  }
  if (!is_p_integral(Rational(nf.k.c / Rational(pn)), p)) return false;
  if (!is_p_unit(nf.k.det(), p)) return false;
  if (nf.nu.a != 1 || nf.nu.c != 0 || nf.nu.d != 1 || !is_p_integral(nf.nu.b, p)) return false;
  return true;
}

}  // namespace cuspnorm
