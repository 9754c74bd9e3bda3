#pragma once

// Exact elementary number theory on 64-bit integers.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cuspnorm/numeric.hpp"

namespace cuspnorm::arith {

struct PrimePower {
  std::int64_t p = 0;
  int e = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization sorted by prime, every exponent >= 1. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

/// Trial division. Requires n >= 1.
Factorization factor(std::int64_t n);
std::int64_t reconstruct(const Factorization& f);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t limit);
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// v_p(n) for n != 0.
int valuation(std::int64_t n, std::int64_t p);
int valuation(const Integer& n, std::int64_t p);
/// v_p(num) - v_p(den); requires q != 0.
int valuation(const Rational& q, std::int64_t p);

std::int64_t ipow(std::int64_t base, int exponent);
/// Non-negative residue.
std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

struct ExtGcd {
  std::int64_t g, x, y;  // a*x + b*y = g >= 0
};
ExtGcd ext_gcd(std::int64_t a, std::int64_t b);
std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m);

/// N = squarefree * square_root^2 with the square part maximal (N2, N0).
struct SquarefreeSplit {
  std::int64_t squarefree = 1;
  std::int64_t square_root = 1;
};
SquarefreeSplit squarefree_split(std::int64_t n);
bool is_squarefree(std::int64_t n);
std::int64_t radical(std::int64_t n);

/// (|n|, N^inf): largest divisor of |n| supported on primes dividing N. n != 0.
std::int64_t smooth_part(std::int64_t n, std::int64_t level);
Integer smooth_part(const Integer& n, std::int64_t level);

/// prod p^ceil(a/2) over f = prod p^a.
std::int64_t ceil_sqrt_div(std::int64_t f);

std::int64_t euler_phi(std::int64_t n);
std::int64_t sigma1(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// Primes p with lambda < p < 2*lambda and p = 1 mod m, ascending.
std::vector<std::int64_t> primes_in_progression(std::int64_t lambda, std::int64_t m);

struct Congruence {
  Integer residue;
  Integer modulus;
};

/// Combines x = r_i mod m_i. Returns the residue in [0, lcm) and the lcm, or
/// nullopt when two congruences conflict.
std::optional<Congruence> crt_solve(std::span<const Congruence> system);

/// Solutions of a*x = b (mod m) as a single class x = r mod m/g, or nullopt.
std::optional<Congruence> solve_linear_congruence(const Integer& a, const Integer& b, const Integer& m);

}  // namespace cuspnorm::arith
