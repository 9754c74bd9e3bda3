#pragma once

// Cusps of Gamma0(N): denominators, widths, per-prime profiles and the
// local double-coset normal form.

#include <cstdint>
#include <vector>

#include "cuspnorm/modgroup.hpp"

namespace cuspnorm {

/// gcd(c, N) for tau = (a b; c d) in SL2(Z), with gcd(0, N) = N.
std::int64_t cusp_denominator(const Mat2& tau, std::int64_t N);
/// N / gcd(C(tau)^2, N).
std::int64_t cusp_width(const Mat2& tau, std::int64_t N);
/// Same two formulas starting from a known denominator C | N.
std::int64_t width_from_denominator(std::int64_t C, std::int64_t N);

struct CuspClass {
  std::int64_t a = 1;  // representative a/c, gcd(a, c) = 1; infinity is 1/0
  std::int64_t c = 0;
  std::int64_t denominator = 1;
  std::int64_t width = 1;
  Mat2 tau;  // tau(infinity) = a/c
};

/// One representative per Gamma0(N)-orbit, sorted by (denominator, a).
std::vector<CuspClass> enumerate_cusps(std::int64_t N);
/// Sum over c | N of phi(gcd(c, N/c)).
std::int64_t cusp_count_formula(std::int64_t N);

struct LocalData {
  std::int64_t p = 0;
  int n_p = 0;
  int c_p = 0;
  int w_p = 0;
};
using LocalProfile = std::vector<LocalData>;

LocalProfile local_profile(const Mat2& tau, std::int64_t N);

/// k * tau * nu = (1 0; p^c v).
struct NormalForm {
  Mat2Q k;
  Mat2Q nu;
  Mat2Q form;
  int c_p = 0;
  Rational v;          // p-adic unit
  Integer v_residue;   // v reduced modulo p^{n_p}
  int branch = 0;      // 1: p does not divide c, 2: 0 < v_p(c) < n_p, 3: v_p(c) >= n_p
};

NormalForm doublecoset_normal_form(const Mat2& tau, std::int64_t p, int n_p);

/// v_p(q) >= 0 (zero counts as integral).
bool is_p_integral(const Rational& q, std::int64_t p);
bool is_p_unit(const Rational& q, std::int64_t p);
/// Re-checks every structural claim of a normal form: the product identity,
/// k p-integral with p^{n_p} | k_21 and det k a p-unit, nu unipotent upper
/// triangular and p-integral, v a p-unit.
bool verify_normal_form(const Mat2& tau, std::int64_t p, int n_p, const NormalForm& nf);

}  // namespace cuspnorm
