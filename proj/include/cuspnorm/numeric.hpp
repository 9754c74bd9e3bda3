#pragma once

// Exact and high-precision scalar types shared by all modules.
//
// Integer / Rational are GMP values (gmpxx), Real is an MPFR float whose
// working precision is fixed once per process (CUSPNORM_PRECISION digits,
// default 50, plus guard digits).

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

namespace cuspnorm {

using Integer = mpz_class;
using Rational = mpq_class;
using Real = boost::multiprecision::mpfr_float;

// ---- integer helpers ------------------------------------------------------

Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);
/// Non-negative residue of a modulo m (m > 0).
Integer mod(const Integer& a, const Integer& m);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
/// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);
bool is_square(const Integer& n, Integer* root = nullptr);
Integer pow(const Integer& base, unsigned long exponent);

bool fits_int64(const Integer& n);
/// Throws Error(OutOfRange) when n does not fit.
std::int64_t to_int64(const Integer& n);

/// num/den in lowest terms (gmpxx's two-argument constructor does not reduce).
Rational frac(const Integer& num, const Integer& den);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
bool is_integral(const Rational& q);
Rational abs(const Rational& q);

/// Parses "p/q", "p" or "-p/q" (whitespace not allowed). Throws Error(ParseError).
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);
/// "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& q);
std::string to_string(const Integer& n);

// ---- reporting reals ------------------------------------------------------

/// Significant digits used when printing reals (CUSPNORM_PRECISION or 50).
unsigned reporting_digits();
/// Sets the MPFR default precision once; all Real-producing functions call it.
void init_real_precision();
Real to_real(const Rational& q);
Real to_real(const Integer& n);
std::string format_real(const Real& value);

}  // namespace cuspnorm
