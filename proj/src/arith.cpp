#include "cuspnorm/arith.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "cuspnorm/error.hpp"

namespace cuspnorm::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

void require_positive(std::int64_t n, const char* what) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, std::string(what) + " requires a positive integer");
}

}  // namespace

Factorization factor(std::int64_t n) {
  require_positive(n, "factor");
  Factorization out;
  auto take = [&](std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  take(2);
  take(3);
  for (std::int64_t p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t reconstruct(const Factorization& f) {
  std::int64_t n = 1;
  for (const auto& [p, e] : f) n *= ipow(p, e);
  return n;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  const u64 m = static_cast<u64>(n);
  u64 d = m - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (const auto& pp : factor(n)) out.push_back(pp.p);
  return out;
}

int valuation(std::int64_t n, std::int64_t p) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int valuation(const Integer& n, std::int64_t p) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  Integer prime(static_cast<long>(p));
  Integer rest(n);
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

int valuation(const Rational& q, std::int64_t p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

std::int64_t ipow(std::int64_t base, int exponent) {
  std::int64_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  auto [g, x, y] = ext_gcd(mod(a, m), m);
  (void)y;
  if (g != 1) return std::nullopt;
  return mod(x, m);
}

SquarefreeSplit squarefree_split(std::int64_t n) {
  require_positive(n, "squarefree_split");
  SquarefreeSplit s;
  for (const auto& [p, e] : factor(n)) {
    s.square_root *= ipow(p, e / 2);
    if (e % 2 == 1) s.squarefree *= p;
  }
  return s;
}

bool is_squarefree(std::int64_t n) { return squarefree_split(n).square_root == 1; }

std::int64_t radical(std::int64_t n) {
  std::int64_t r = 1;
  for (const auto& pp : factor(n)) r *= pp.p;
  return r;
}

std::int64_t smooth_part(std::int64_t n, std::int64_t level) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "smooth_part of zero");
  std::int64_t rest = n < 0 ? -n : n;
  const std::int64_t rad = radical(level);
  std::int64_t part = 1;
  for (std::int64_t g = std::gcd(rest, rad); g > 1; g = std::gcd(rest, rad)) {
    rest /= g;
    part *= g;
  }
  return part;
}

Integer smooth_part(const Integer& n, std::int64_t level) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "smooth_part of zero");
  Integer rest = n < 0 ? Integer(-n) : n;
  const Integer rad(static_cast<long>(radical(level)));
  Integer part = 1;
  for (Integer g = cuspnorm::gcd(rest, rad); g > 1; g = cuspnorm::gcd(rest, rad)) {
    rest /= g;
    part *= g;
  }
  return part;
}

std::int64_t ceil_sqrt_div(std::int64_t f) {
  require_positive(f, "ceil_sqrt_div");
  std::int64_t r = 1;
  for (const auto& [p, e] : factor(f)) r *= ipow(p, (e + 1) / 2);
  return r;
}

std::int64_t euler_phi(std::int64_t n) {
  require_positive(n, "euler_phi");
  std::int64_t phi = n;
  for (const auto& pp : factor(n)) phi = phi / pp.p * (pp.p - 1);
  return phi;
}

std::int64_t sigma1(std::int64_t n) {
  std::int64_t s = 1;
  for (const auto& [p, e] : factor(n)) {
    std::int64_t term = 1, pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      term += pk;
    }
    s *= term;
  }
  return s;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> primes_in_progression(std::int64_t lambda, std::int64_t m) {
  require_positive(lambda, "primes_in_progression");
  require_positive(m, "primes_in_progression");
  std::vector<std::int64_t> out;
  for (std::int64_t p : primes_up_to(2 * lambda - 1)) {
    if (p > lambda && p % m == 1 % m) out.push_back(p);
  }
  return out;
}

std::optional<Congruence> crt_solve(std::span<const Congruence> system) {
  Congruence acc{Integer(0), Integer(1)};
  for (const auto& [residue, modulus] : system) {
    if (modulus < 1) throw Error(ErrorKind::InvalidArgument, "crt_solve requires moduli >= 1");
    // acc.residue + acc.modulus * k = residue (mod modulus)
    Integer g = cuspnorm::gcd(acc.modulus, modulus);
    Integer diff = residue - acc.residue;
    if (cuspnorm::mod(diff, g) != 0) return std::nullopt;
    Integer m_over_g = modulus / g;
    Integer inv;
    Integer base = cuspnorm::mod(Integer(acc.modulus / g), m_over_g);
    if (m_over_g == 1) {
      inv = 0;
    } else {
      mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), m_over_g.get_mpz_t());
    }
    Integer k = cuspnorm::mod(Integer((diff / g) * inv), m_over_g);
    Integer new_modulus = acc.modulus * m_over_g;
    acc.residue = cuspnorm::mod(Integer(acc.residue + acc.modulus * k), new_modulus);
    acc.modulus = new_modulus;
  }
  return acc;
}

std::optional<Congruence> solve_linear_congruence(const Integer& a, const Integer& b, const Integer& m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
  Integer g = cuspnorm::gcd(a, m);
  if (cuspnorm::mod(b, g) != 0) return std::nullopt;
  Integer m_g = m / g;
  if (m_g == 1) return Congruence{Integer(0), Integer(1)};
  Integer a_g = cuspnorm::mod(Integer(a / g), m_g);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), a_g.get_mpz_t(), m_g.get_mpz_t());
  return Congruence{cuspnorm::mod(Integer((b / g) * inv), m_g), m_g};
}

}  // namespace cuspnorm::arith
