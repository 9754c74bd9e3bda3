#include "cuspnorm/modgroup.hpp"

#include <sstream>
#include <tuple>

#include "cuspnorm/error.hpp"

namespace cuspnorm {

Mat2 make_mat(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return {Integer(static_cast<long>(a)), Integer(static_cast<long>(b)), Integer(static_cast<long>(c)),
          Integer(static_cast<long>(d))};
}

Mat2Q to_rational(const Mat2& m) { return {Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d)}; }

bool is_integral(const Mat2Q& m) {
  return is_integral(m.a) && is_integral(m.b) && is_integral(m.c) && is_integral(m.d);
}

Mat2 to_integer(const Mat2Q& m) {
  if (!is_integral(m)) throw Error(ErrorKind::InvalidArgument, "matrix has non-integral entries");
  return {m.a.get_num(), m.b.get_num(), m.c.get_num(), m.d.get_num()};
}

Mat2Q inverse(const Mat2Q& m) {
  Rational det = m.det();
  if (det == 0) throw Error(ErrorKind::InvalidArgument, "singular matrix");
  Mat2Q adj = m.adjugate();
  return {Rational(adj.a / det), Rational(adj.b / det), Rational(adj.c / det), Rational(adj.d / det)};
}

Mat2 inverse_sl2(const Mat2& m) {
  if (m.det() != 1) throw Error(ErrorKind::NotUnimodular, "determinant is not 1");
  return m.adjugate();
}

bool is_sl2(const Mat2& m) { return m.det() == 1; }

bool lex_cadb_less(const Mat2& x, const Mat2& y) {
  if (x.c != y.c) return x.c < y.c;
  if (x.a != y.a) return x.a < y.a;
  if (x.d != y.d) return x.d < y.d;
  return x.b < y.b;
}

namespace gens {
Mat2 S() { return make_mat(0, -1, 1, 0); }
Mat2 T(const Integer& k) { return {Integer(1), k, Integer(0), Integer(1)}; }
}  // namespace gens

PointH::PointH(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {
  x.canonicalize();
  y.canonicalize();
  if (sgn(y) <= 0) throw Error(ErrorKind::InvalidArgument, "point must lie in the upper half-plane (y > 0)");
}

std::string format_point(const PointH& z) { return to_string(z.x) + "," + to_string(z.y); }

PointH parse_point(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "point must be 'X,Y', got '" + std::string(text) + "'");
  }
  Rational x = parse_rational(text.substr(0, comma));
  Rational y = parse_rational(text.substr(comma + 1));
  if (sgn(y) <= 0) throw Error(ErrorKind::ParseError, "point must have positive imaginary part");
  return {x, y};
}

std::ostream& operator<<(std::ostream& os, const PointH& z) { return os << format_point(z); }

Rational norm2(const PointH& z) { return z.x * z.x + z.y * z.y; }

Rational cz_plus_d_norm2(const Rational& c, const Rational& d, const PointH& z) {
  Rational re = c * z.x + d;
  Rational im = c * z.y;
  return re * re + im * im;
}

PointH mobius_act(const Mat2Q& g, const PointH& z) {
  Rational det = g.det();
  if (sgn(det) <= 0) throw Error(ErrorKind::InvalidArgument, "mobius_act requires det > 0");
  Rational den_re = g.c * z.x + g.d;
  Rational den_im = g.c * z.y;
  Rational den = den_re * den_re + den_im * den_im;
  Rational num_re = g.a * z.x + g.b;
  Rational num_im = g.a * z.y;
  // (num_re + i num_im)(den_re - i den_im) / den
  Rational re = (num_re * den_re + num_im * den_im) / den;
  Rational im = det * z.y / den;
  return {re, im};
}

PointH mobius_act(const Mat2& g, const PointH& z) { return mobius_act(to_rational(g), z); }

Rational point_pair_u(const PointH& z, const PointH& w) {
  Rational dx = z.x - w.x;
  Rational dy = z.y - w.y;
  return (dx * dx + dy * dy) / (4 * z.y * w.y);
}

bool in_fundamental_domain(const PointH& z) {
  return abs(z.x) <= Rational(1, 2) && norm2(z) >= 1;
}

FdReduction fd_reduce(const PointH& z) {
  // Invariant: z == tau * w as Mobius maps. Each inversion strictly raises
  // Im w, and there are finitely many heights above Im z reachable on the
  // lattice of denominators, so the loop terminates.
  Mat2 tau = Mat2::identity();
  PointH w = z;
  const Rational half(1, 2);
  for (;;) {
    Integer k = floor(Rational(w.x + half));
    if (k != 0) {
      w = PointH(w.x - k, w.y);
      tau = tau * gens::T(k);
    }
    if (norm2(w) < 1) {
      w = mobius_act(gens::S(), w);
      tau = tau * gens::S();
      continue;
    }
    break;
  }
  if (w.x == -half) {
    w = PointH(w.x + 1, w.y);
    tau = tau * gens::T(Integer(-1));
  }
  if (norm2(w) == 1 && sgn(w.x) < 0) {
    w = mobius_act(gens::S(), w);
    tau = tau * gens::S();
  }
  return {tau, w};
}

}  // namespace cuspnorm
