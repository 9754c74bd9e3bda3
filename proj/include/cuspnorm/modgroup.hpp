#pragma once

// 2x2 matrices over Z and Q, the Mobius action on rational points of the
// upper half-plane, the point-pair invariant and SL2(Z) reduction.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "cuspnorm/numeric.hpp"

namespace cuspnorm {

template <class T>
struct Matrix2 {
  T a{1}, b{0}, c{0}, d{1};

  Matrix2() = default;
  Matrix2(T a_, T b_, T c_, T d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static Matrix2 identity() { return {}; }
  static Matrix2 scalar(const T& s) { return {s, T(0), T(0), s}; }

  T det() const { return T(a * d - b * c); }
  T trace() const { return T(a + d); }
  /// adj(g) with g * adj(g) = det(g) * I.
  Matrix2 adjugate() const { return {d, T(-b), T(-c), a}; }
  Matrix2 operator-() const { return {T(-a), T(-b), T(-c), T(-d)}; }

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {T(x.a * y.a + x.b * y.c), T(x.a * y.b + x.b * y.d), T(x.c * y.a + x.d * y.c),
            T(x.c * y.b + x.d * y.d)};
  }
  friend bool operator==(const Matrix2& x, const Matrix2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const Matrix2& x, const Matrix2& y) { return !(x == y); }
  friend std::ostream& operator<<(std::ostream& os, const Matrix2& m) {
    return os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
  }
};

using Mat2 = Matrix2<Integer>;
using Mat2Q = Matrix2<Rational>;

Mat2 make_mat(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
Mat2Q to_rational(const Mat2& m);
bool is_integral(const Mat2Q& m);
/// Throws Error(InvalidArgument) if some entry is not an integer.
Mat2 to_integer(const Mat2Q& m);
Mat2Q inverse(const Mat2Q& m);
/// Exact inverse of an SL2(Z) matrix.
Mat2 inverse_sl2(const Mat2& m);
bool is_sl2(const Mat2& m);
/// Lexicographic order on (c, a, d, b).
bool lex_cadb_less(const Mat2& x, const Mat2& y);

namespace gens {
Mat2 S();                     // (0 -1; 1 0)
Mat2 T(const Integer& k = 1);  // (1 k; 0 1)
}  // namespace gens

/// Exact rational point x + iy with y > 0.
struct PointH {
  Rational x;
  Rational y;

  PointH() : x(0), y(1) {}
  /// Throws Error(InvalidArgument) unless y > 0.
  PointH(Rational x_, Rational y_);

  friend bool operator==(const PointH& p, const PointH& q) { return p.x == q.x && p.y == q.y; }
  friend bool operator!=(const PointH& p, const PointH& q) { return !(p == q); }
};

/// "x_num/x_den,y_num/y_den" (integers are written without a denominator).
std::string format_point(const PointH& z);
/// Accepts any "X,Y" where X and Y are integers or p/q.
PointH parse_point(std::string_view text);
std::ostream& operator<<(std::ostream& os, const PointH& z);

/// |z|^2 for the complex number x + iy.
Rational norm2(const PointH& z);
/// (az+b)/(cz+d). Requires det(g) > 0.
PointH mobius_act(const Mat2Q& g, const PointH& z);
PointH mobius_act(const Mat2& g, const PointH& z);
/// |cz + d|^2 for integers/rationals c, d.
Rational cz_plus_d_norm2(const Rational& c, const Rational& d, const PointH& z);

/// u(z, w) = |z - w|^2 / (4 Im z Im w).
Rational point_pair_u(const PointH& z, const PointH& w);

struct FdReduction {
  Mat2 tau;   // z = tau z0, tau in SL2(Z)
  PointH z0;  // closed standard fundamental domain
};

/// Gauss reduction. z0 satisfies -1/2 < x0 <= 1/2, |z0| >= 1 and x0 >= 0 when |z0| = 1.
FdReduction fd_reduce(const PointH& z);
/// Closed standard fundamental domain: |x| <= 1/2 and |z|^2 >= 1.
bool in_fundamental_domain(const PointH& z);

}  // namespace cuspnorm
