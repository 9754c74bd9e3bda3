#include "cuspnorm/numeric.hpp"

#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>

#include "cuspnorm/error.hpp"

namespace cuspnorm {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer isqrt(const Integer& n) {
  if (sgn(n) < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Integer& n, Integer* root) {
  if (sgn(n) < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) *root = isqrt(n);
  return true;
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

bool fits_int64(const Integer& n) {
  static const Integer lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const Integer hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return n >= lo && n <= hi;
}

std::int64_t to_int64(const Integer& n) {
  if (!fits_int64(n)) throw Error(ErrorKind::OutOfRange, "integer does not fit in 64 bits: " + n.get_str());
  return static_cast<std::int64_t>(std::stoll(n.get_str()));
}

Rational frac(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer floor(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }
Integer ceil(const Rational& q) { return ceil_div(q.get_num(), q.get_den()); }
bool is_integral(const Rational& q) { return q.get_den() == 1; }
Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Integer parse_integer(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty integer");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw Error(ErrorKind::ParseError, "malformed integer '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw Error(ErrorKind::ParseError, "malformed integer '" + std::string(text) + "'");
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return Integer(digits);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw Error(ErrorKind::ParseError, "denominator must be unsigned in '" + std::string(text) + "'");
  }
  Integer den = parse_integer(den_text);
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

std::string to_string(const Integer& n) { return n.get_str(); }

unsigned reporting_digits() {
  static const unsigned digits = [] {
    const char* env = std::getenv("CUSPNORM_PRECISION");
    if (env == nullptr || *env == '\0') return 50u;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 5 || v > 10000) return 50u;
    return static_cast<unsigned>(v);
  }();
  return digits;
}

void init_real_precision() {
  static std::once_flag once;
  std::call_once(once, [] { Real::default_precision(reporting_digits() + 10); });
}

Real to_real(const Rational& q) {
  init_real_precision();
  Real num(q.get_num().get_str());
  Real den(q.get_den().get_str());
  return num / den;
}

Real to_real(const Integer& n) {
  init_real_precision();
  return Real(n.get_str());
}

std::string format_real(const Real& value) {
  std::ostringstream os;
  os.precision(reporting_digits());
  os << value;
  return os.str();
}

}  // namespace cuspnorm
