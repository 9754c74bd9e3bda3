#pragma once

// Exponent bookkeeping modulo N^eps. A monomial N^a M^b Lambda^c y^d N0^e L^f
// is an ExponentVector; a bound is the max of finitely many monomials. With
// M = N^mu, y = N^-eta, N0 = N^nu, Lambda = N^alpha, L = N^lambda every
// monomial becomes an affine form in (mu, eta, nu, alpha, lambda), and
// domination over a polytope of such parameters is decided by exact vertex
// enumeration.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cuspnorm/numeric.hpp"

namespace cuspnorm {

enum class Param { N, M, Lambda, y, N0, L };
constexpr int kParams = 6;
const char* to_string(Param p);

struct ExponentVector {
  std::array<Rational, kParams> e{};

  ExponentVector() = default;
  static ExponentVector of(Param p, const Rational& exponent = 1);
  /// Convenience: exponents listed in Param order.
  static ExponentVector make(const Rational& eN, const Rational& eM = 0, const Rational& eLambda = 0,
                             const Rational& ey = 0, const Rational& eN0 = 0, const Rational& eL = 0);

  const Rational& operator[](Param p) const { return e[static_cast<int>(p)]; }
  Rational& operator[](Param p) { return e[static_cast<int>(p)]; }

  friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b);
  friend ExponentVector operator*(const Rational& k, const ExponentVector& a);
  friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.e == b.e; }
  friend bool operator<(const ExponentVector& a, const ExponentVector& b) { return a.e < b.e; }
};

/// "M^2*N^(-1/3)" style rendering; "1" for the zero vector.
std::string to_string(const ExponentVector& v);

using MonomialBound = std::set<ExponentVector>;
std::string to_string(const MonomialBound& b);

MonomialBound bound_product(const MonomialBound& b1, const MonomialBound& b2);
/// Replaces param^e by replacement^e in every monomial.
/// Throws Error(InvalidArgument) if the replacement itself involves param.
ExponentVector substitute(const ExponentVector& v, Param param, const ExponentVector& replacement);
MonomialBound substitute(const MonomialBound& b, Param param, const ExponentVector& replacement);

// ---- log-parameter polytopes -------------------------------------------------

enum class LogVar { mu, eta, nu, alpha, lambda };
constexpr int kLogVars = 5;
const char* to_string(LogVar v);

using Point = std::array<Rational, kLogVars>;

struct LinearForm {
  Rational constant = 0;
  std::array<Rational, kLogVars> coeff{};

  static LinearForm var(LogVar v, const Rational& k = 1);
  static LinearForm value(const Rational& c);
  Rational eval(const Point& x) const;
  friend LinearForm operator+(const LinearForm& a, const LinearForm& b);
  friend LinearForm operator-(const LinearForm& a, const LinearForm& b);
  friend LinearForm operator*(const Rational& k, const LinearForm& a);
};

/// log_N of the monomial: e_N + e_M mu - e_y eta + e_N0 nu + e_Lambda alpha + e_L lambda.
LinearForm log_form(const ExponentVector& v);
std::string to_string(const LinearForm& f);

struct Constraint {
  LinearForm form;  // form(x) <= 0
  std::string label;
};

struct ConstraintSet {
  std::vector<Constraint> rows;

  ConstraintSet& le(const LinearForm& a, const LinearForm& b, std::string label = {});
  ConstraintSet& ge(const LinearForm& a, const LinearForm& b, std::string label = {});
  ConstraintSet& between(LogVar v, const Rational& lo, const Rational& hi, std::string label = {});
  ConstraintSet& equal(LogVar v, const Rational& value, std::string label = {});
  bool contains(const Point& x) const;
};

/// Vertices of the polytope in the variables that occur in the constraints or in `extra`.
/// Throws Error(InfeasibleConstraints) or Error(UnboundedPolytope).
std::vector<Point> polytope_vertices(const ConstraintSet& c, const std::vector<LinearForm>& extra = {});

struct Maximum {
  Rational value;
  Point at;
};
Maximum maximize(const LinearForm& f, const ConstraintSet& c);

struct MonomialCertificate {
  ExponentVector monomial;
  Rational max_exponent;  // max of log_form(monomial) over the polytope
  Point at;
  Rational margin;        // min over the polytope of (target - monomial); >= 0 on success
};

struct Domination {
  bool ok = false;
  std::vector<MonomialCertificate> certificates;
  std::optional<ExponentVector> failed_monomial;
  std::optional<Point> witness;
};

/// Decides monomial <= max(target) on the whole polytope for every monomial of b.
/// With several target monomials the polytope is split by which target term is largest.
Domination dominated_by(const MonomialBound& b, const MonomialBound& target, const ConstraintSet& c);
Domination dominated_by(const MonomialBound& b, const ExponentVector& target, const ConstraintSet& c);

// ---- piecewise-linear functions of one log-parameter ------------------------

struct PiecewiseLinear {
  std::vector<std::pair<Rational, Rational>> knots;  // (parameter, value), ascending, linear in between
  Rational at(const Rational& p) const;
  std::string to_string() const;
};

/// p -> max over the slice {param = p} of max_i forms[i] (concave pieces joined by a max).
PiecewiseLinear parametric_max(const std::vector<LinearForm>& forms, const ConstraintSet& c, LogVar param);
PiecewiseLinear pl_max(const std::vector<PiecewiseLinear>& parts);
/// Same function up to redundant knots.
bool pl_equal(const PiecewiseLinear& a, const PiecewiseLinear& b);

// ---- the analytic inputs ------------------------------------------------------

struct FourierBound {
  bool high_branch = false;  // y >= 1/M^2
  Rational value_pow4;       // (bound)^4, exact
  Real value;                // bound
};

/// (Ny)^{-1/2} on 1/N <= y <= 1/M^2, M^{1/2} N^{-1/2} y^{-1/4} for y >= 1/M^2.
/// Throws Error(InvalidM) unless M^2 | N, Error(OutOfRange) if y < 1/N.
FourierBound fourier_sup_bound(std::int64_t N, std::int64_t M, const Rational& y);
/// The two branches as monomials.
ExponentVector fourier_low_branch();
ExponentVector fourier_high_branch();
/// log_N of the bound at M = N^mu, y = N^-eta (requires eta <= 1).
Rational fourier_exponent(const Rational& mu, const Rational& eta);

/// phi(M) / gcd(M, 2).
Rational norm_factor(std::int64_t M);

/// #{1 <= t <= X : every prime factor of t divides N}.
std::int64_t smooth_count(std::int64_t X, std::int64_t N);

// ---- the two pipelines ---------------------------------------------------------

struct DerivationStep {
  std::string op;
  std::string input;
  std::string output;
  std::string certificate;
  bool ok = true;
};

enum class TheoremCase { Main, Case2 };
const char* to_string(TheoremCase c);
/// Throws Error(InvalidArgument) for anything but "main" or "case2".
TheoremCase parse_theorem_case(std::string_view s);

struct DerivationReport {
  TheoremCase which = TheoremCase::Main;
  std::vector<DerivationStep> steps;
  bool ok = false;
  /// Sup-norm exponent as a function of nu = log_N N0 (constant for the main case).
  PiecewiseLinear exponent;
  std::string exponent_text;
  /// Largest exponent over nu in [0, 1/2].
  Rational worst_exponent;
  /// The four substituted amplification terms and their maxima (main case).
  std::vector<std::pair<ExponentVector, Rational>> amplification_maxima;
  std::vector<std::string> axioms;
  std::string epsilon_note;
};

DerivationReport theorem_pipeline(TheoremCase which);

}  // namespace cuspnorm
