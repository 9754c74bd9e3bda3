#include <map>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/error.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace cuspnorm;
using namespace cuspnorm::arith;

TEST_CASE("factor small values") {
  CHECK(factor(12) == Factorization{{2, 2}, {3, 1}});
  CHECK(factor(1).empty());
  CHECK(factor(97) == Factorization{{97, 1}});
  CHECK_THROWS_AS(factor(0), Error);
}

TEST_CASE("factor reconstructs and is sorted up to 10^6") {
  for (std::int64_t n = 1; n <= 1'000'000; ++n) {
    auto f = factor(n);
    std::int64_t prev = 1;
    for (const auto& [p, e] : f) {
      REQUIRE(p > prev);
      REQUIRE(e >= 1);
      prev = p;
    }
    REQUIRE(reconstruct(f) == n);
  }
}

TEST_CASE("primality agrees with a sieve") {
  auto primes = primes_up_to(20000);
  std::vector<bool> sieve(20001, false);
  for (auto p : primes) sieve[p] = true;
  for (std::int64_t n = 0; n <= 20000; ++n) REQUIRE(is_prime(n) == sieve[n]);
  CHECK(is_prime(1'000'000'007));
  CHECK(is_prime(9'223'372'036'854'775'783LL));
  CHECK_FALSE(is_prime(3'215'031'751LL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("squarefree split") {
  CHECK(squarefree_split(12).squarefree == 3);
  CHECK(squarefree_split(12).square_root == 2);
  CHECK(squarefree_split(1).squarefree == 1);
  CHECK(squarefree_split(1).square_root == 1);
  CHECK(squarefree_split(36).squarefree == 1);
  CHECK(squarefree_split(36).square_root == 6);
  for (std::int64_t n = 1; n <= 10000; ++n) {
    auto [n2, n0] = squarefree_split(n);
    REQUIRE(n2 * n0 * n0 == n);
    for (std::int64_t k = 2; k * k <= n2; ++k) REQUIRE(n2 % (k * k) != 0);
    // maximality: no larger square divides n
    for (std::int64_t k = n0 + 1; k * k <= n; ++k) REQUIRE(n % (k * k) != 0);
  }
}

TEST_CASE("smooth part") {
  CHECK(smooth_part(24, 10) == 8);
  CHECK(smooth_part(7, 10) == 1);
  CHECK(smooth_part(-18, 6) == 18);
  CHECK(smooth_part(Integer(-18), 6) == 18);
  gen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t n = rng.uniform(-100000, 100000);
    if (n == 0) continue;
    std::int64_t N = rng.uniform(1, 500);
    std::int64_t n1 = smooth_part(n, N);
    std::int64_t absn = n < 0 ? -n : n;
    REQUIRE(absn % n1 == 0);
    REQUIRE(gcd(absn / n1, N) == 1);
    // the limit (|n|, N^k) stabilises at n1
    // 2^17 > 10^5, so exponent 17 already saturates every prime power
    Integer Nk = pow(Integer(static_cast<long>(N)), 17);
    REQUIRE(gcd(Integer(static_cast<long>(absn)), Nk) == n1);
  }
}

TEST_CASE("ceil sqrt div") {
  CHECK(ceil_sqrt_div(12) == 6);
  CHECK(ceil_sqrt_div(1) == 1);
  CHECK(ceil_sqrt_div(18) == 6);
  for (std::int64_t f = 1; f <= 10000; ++f) {
    std::int64_t r = ceil_sqrt_div(f);
    REQUIRE((r * r) % f == 0);
    for (std::int64_t a = 1; a <= 1000; ++a) {
      if ((a * a) % f == 0) REQUIRE(a % r == 0);
    }
  }
}

TEST_CASE("euler phi") {
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(97) == 96);
  for (std::int64_t n = 1; n <= 500; ++n) {
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n; ++k) count += gcd(k, n) == 1;
    REQUIRE(euler_phi(n) == count);
  }
}

TEST_CASE("primes in progression") {
  CHECK(primes_in_progression(10, 3) == std::vector<std::int64_t>{13, 19});
  CHECK(primes_in_progression(2, 1) == std::vector<std::int64_t>{3});
  CHECK(primes_in_progression(3, 5).empty());
}

TEST_CASE("crt") {
  std::vector<Congruence> a{{Integer(1), Integer(3)}, {Integer(2), Integer(4)}};
  auto r = crt_solve(a);
  REQUIRE(r);
  CHECK(r->residue == 10);
  CHECK(r->modulus == 12);
  std::vector<Congruence> b{{Integer(0), Integer(5)}};
  r = crt_solve(b);
  REQUIRE(r);
  CHECK(r->residue == 0);
  CHECK(r->modulus == 5);
  std::vector<Congruence> c{{Integer(1), Integer(2)}, {Integer(0), Integer(4)}};
  CHECK_FALSE(crt_solve(c));

  gen::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    std::int64_t m1 = rng.uniform(1, 60), m2 = rng.uniform(1, 60);
    std::int64_t r1 = rng.uniform(0, m1 - 1), r2 = rng.uniform(0, m2 - 1);
    std::vector<Congruence> sys{{Integer(static_cast<long>(r1)), Integer(static_cast<long>(m1))},
                                {Integer(static_cast<long>(r2)), Integer(static_cast<long>(m2))}};
    auto sol = crt_solve(sys);
    std::int64_t L = lcm(m1, m2);
    std::int64_t brute = -1;
    for (std::int64_t x = 0; x < L; ++x) {
      if (x % m1 == r1 && x % m2 == r2) {
        brute = x;
        break;
      }
    }
    if (brute < 0) {
      REQUIRE_FALSE(sol);
    } else {
      REQUIRE(sol);
      REQUIRE(sol->residue == brute);
      REQUIRE(sol->modulus == L);
    }
  }
}

TEST_CASE("cusp-count identity over divisors matches sum of phi") {
  // sum_{c|N} phi(gcd(c, N/c)) is multiplicative; compare with a direct loop
  for (std::int64_t N = 1; N <= 300; ++N) {
    std::int64_t direct = 0;
    for (std::int64_t c = 1; c <= N; ++c) {
      if (N % c == 0) direct += euler_phi(gcd(c, N / c));
    }
    std::int64_t mult = 1;
    for (const auto& [p, e] : factor(N)) {
      std::int64_t local = 0;
      for (int k = 0; k <= e; ++k) local += euler_phi(ipow(p, std::min(k, e - k)));
      mult *= local;
    }
    REQUIRE(direct == mult);
  }
}

TEST_CASE("divisors and sigma") {
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(sigma1(4) == 7);
  CHECK(sigma1(1) == 1);
  CHECK(radical(72) == 6);
}
