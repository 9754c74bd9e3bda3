#include <doctest.h>

#include <map>
#include <set>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/conjugation.hpp"
#include "cuspnorm/counting.hpp"
#include "cuspnorm/cusps.hpp"
#include "cuspnorm/error.hpp"
#include "cuspnorm/hecke.hpp"
#include "gen.hpp"

using namespace cuspnorm;

namespace {

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

// Independent equivalence test written from the definition: g2 = k g1 with k
// integral, det 1, N | lower-left, top-left = 1 mod M.
bool equivalent(const Mat2& g1, const Mat2& g2, std::int64_t N, std::int64_t M) {
  Mat2Q k = to_rational(g2) * inverse(to_rational(g1));
  if (!is_integral(k)) return false;
  Mat2 ki = to_integer(k);
  return ki.det() == 1 && mod(ki.c, big(N)) == 0 && mod(Integer(ki.a - 1), big(M)) == 0;
}

// Every member of Delta(l,N;M) with entries in [-B, B].
std::vector<Mat2> delta_box(std::int64_t l, std::int64_t N, std::int64_t M, std::int64_t B) {
  std::vector<Mat2> out;
  for (std::int64_t a = -B; a <= B; ++a) {
    if (((a - 1) % M + M) % M != 0) continue;
    for (std::int64_t c = -B; c <= B; c += 1) {
      if (c % N != 0) continue;
      for (std::int64_t d = -B; d <= B; ++d) {
        for (std::int64_t b = -B; b <= B; ++b) {
          if (a * d - b * c == l) out.push_back(make_mat(a, b, c, d));
        }
      }
    }
  }
  return out;
}

std::int64_t N0_of(std::int64_t N) { return arith::squarefree_split(N).square_root; }

}  // namespace

TEST_CASE("hnf representatives") {
  CHECK(hnf_reps(1) == std::vector<Mat2>{Mat2::identity()});
  CHECK(hnf_reps(2) == std::vector<Mat2>{make_mat(1, 0, 0, 2), make_mat(1, 1, 0, 2), make_mat(2, 0, 0, 1)});
  CHECK(hnf_reps(4).size() == 7);
  for (std::int64_t l = 1; l <= 60; ++l) CHECK(static_cast<std::int64_t>(hnf_reps(l).size()) == arith::sigma1(l));
}

TEST_CASE("hnf reps are SL2-inequivalent and cover every det-l matrix") {
  for (std::int64_t l : {6, 12}) {
    auto hs = hnf_reps(l);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      for (std::size_t j = i + 1; j < hs.size(); ++j) CHECK_FALSE(equivalent(hs[i], hs[j], 1, 1));
    }
  }
  gen::Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    Mat2 g = rng.positive_det(30, 100);
    Mat2 h = hnf_of(g);
    const auto l = to_int64(g.det());
    auto hs = hnf_reps(l);
    CHECK(std::find(hs.begin(), hs.end(), h) != hs.end());
    CHECK(equivalent(h, g, 1, 1));
  }
}

TEST_CASE("coset table examples") {
  CHECK(coset_reps_delta(1, 7, 1).reps.size() == 1);
  CHECK(coset_reps_delta(1, 9, 3).reps.size() == 1);
  CHECK(coset_reps_delta(3, 4, 2).reps.size() == 4);
  CHECK(coset_reps_delta(4, 9, 3).reps.size() == 7);
  CHECK_THROWS_AS(coset_reps_delta(2, 9, 2), Error);
  auto v = coset_count_invariance(3, 4, 2);
  CHECK(v.count_NM == 4);
  CHECK(v.count_N == 4);
  CHECK(v.equal);
  CHECK(coset_count_invariance(4, 9, 3).equal);
  CHECK(coset_count_invariance(1, 30, 1).count_NM == 1);
}

TEST_CASE("coset tables against a bounded brute force") {
  struct Case {
    std::int64_t l, N, M, B;
  };
  for (auto [l, N, M, B] : {Case{2, 4, 2, 9}, Case{3, 4, 2, 9}, Case{4, 9, 3, 10}, Case{2, 3, 3, 8},
                            Case{6, 4, 1, 13}, Case{4, 4, 2, 9}, Case{5, 8, 4, 10}}) {
    auto t = coset_reps_delta(l, N, M);
    for (const auto& g : t.reps) REQUIRE(in_delta(g, l, N, M));
    for (std::size_t i = 0; i < t.reps.size(); ++i) {
      for (std::size_t j = i + 1; j < t.reps.size(); ++j) CHECK_FALSE(equivalent(t.reps[i], t.reps[j], N, M));
    }
    std::set<std::size_t> hit;
    for (const auto& g : delta_box(l, N, M, B)) {
      int matches = 0;
      for (std::size_t i = 0; i < t.reps.size(); ++i) {
        if (equivalent(t.reps[i], g, N, M)) {
          ++matches;
          hit.insert(i);
        }
      }
      INFO("l=" << l << " N=" << N << " M=" << M << " g=" << g);
      CHECK(matches == 1);
    }
    // The box is large enough to meet every coset in these cases.
    INFO("l=" << l << " N=" << N << " M=" << M);
    CHECK(hit.size() == t.reps.size());
  }
}

TEST_CASE("coset key and same_coset agree with the definition") {
  gen::Rng rng(3);
  for (auto [N, M] : {std::pair<std::int64_t, std::int64_t>{9, 3}, {8, 2}, {12, 2}, {25, 5}}) {
    for (std::int64_t l : {1, 4, 7}) {
      auto t = coset_reps_delta(l, N, M);
      std::uint64_t state = 77;
      for (int i = 0; i < 40; ++i) {
        const Mat2& r = t.reps[rng.uniform(0, static_cast<std::int64_t>(t.reps.size()) - 1)];
        const Mat2& s = t.reps[rng.uniform(0, static_cast<std::int64_t>(t.reps.size()) - 1)];
        Mat2 k = random_gamma0_NM(N, M, state);
        REQUIRE(in_gamma0_NM(k, N, M));
        Mat2 g = k * r;
        CHECK(in_delta(g, l, N, M));  // absorption
        CHECK(same_coset(r, g, N, M));
        CHECK(coset_key(r, N, M) == coset_key(g, N, M));
        CHECK(same_coset(s, g, N, M) == equivalent(s, g, N, M));
        CHECK((coset_key(s, N, M) == coset_key(g, N, M)) == equivalent(s, g, N, M));
      }
    }
  }
}

TEST_CASE("coset count equals sigma1(l) for l prime to N") {
  for (std::int64_t N = 1; N <= 60; ++N) {
    for (std::int64_t M : arith::divisors(N0_of(N))) {
      for (std::int64_t l = 1; l <= 12; ++l) {
        if (arith::gcd(l, N) != 1) continue;
        CHECK(static_cast<std::int64_t>(coset_reps_delta(l, N, M).reps.size()) == arith::sigma1(l));
      }
    }
  }
}

TEST_CASE("coset counts agree with M = 1 exactly when gcd(l, M) = 1") {
  // With p | gcd(l, M), a = 1 mod M excludes every coset whose top-left entry
  // is divisible by p, which Delta(l,N;1) keeps.
  for (std::int64_t N = 1; N <= 60; ++N) {
    for (std::int64_t M : arith::divisors(N0_of(N))) {
      for (std::int64_t l = 1; l <= 13; ++l) {
        INFO("N=" << N << " M=" << M << " l=" << l);
        CHECK(coset_count_invariance(l, N, M).equal == (arith::gcd(l, M) == 1));
      }
    }
  }
  CHECK(coset_count_invariance(2, 4, 2).count_NM == 2);
  CHECK(coset_count_invariance(2, 4, 2).count_N == 4);
}

TEST_CASE("conjugation invariance") {
  auto id = conjugation_invariance(Mat2::identity(), 5, 1, 1, 100);
  CHECK(id.pass);
  auto s = conjugation_invariance(make_mat(1, 0, 3, 1), 4, 9, 3, 1000);
  CHECK(s.pass);
  CHECK(s.hypothesis_met);
  CHECK(s.checked >= 1000);
  auto off = conjugation_invariance(make_mat(1, 0, 3, 1), 2, 9, 3, 1000);
  CHECK_FALSE(off.hypothesis_met);
  CHECK((off.pass || off.witness.has_value()));
  if (off.witness) {
    const Mat2& g = *off.witness;
    const Mat2 si = inverse_sl2(make_mat(1, 0, 3, 1));
    CHECK_FALSE((in_delta(make_mat(1, 0, 3, 1) * g * si, 2, 9, 3) && in_delta(si * g * make_mat(1, 0, 3, 1), 2, 9, 3)));
  }
  CHECK_THROWS_AS(conjugation_invariance(make_mat(1, 0, 1, 1), 4, 9, 3), Error);
  CHECK_THROWS_AS(conjugation_invariance(make_mat(1, 0, 3, 1), 4, 12, 2), Error);
}

TEST_CASE("conjugated representatives form a coset system") {
  for (std::int64_t N : {4, 8, 9, 16, 25, 27, 36}) {
    for (std::int64_t M : arith::divisors(N0_of(N))) {
      if (M == 1) continue;
      for (const auto& cusp : enumerate_cusps(N)) {
        if (cusp.denominator != N / M) continue;
        const Mat2& sigma = cusp.tau;
        for (std::int64_t l = 1; l <= 13; ++l) {
          if ((l - 1) % M != 0) continue;
          auto t = coset_reps_delta(l, N, M);
          CHECK(conjugated_reps_valid(sigma, t));
          CHECK(conjugation_invariance(sigma, l, N, M, 200).pass);
        }
      }
    }
  }
}
