#include <doctest.h>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/error.hpp"
#include "cuspnorm/harness.hpp"

using namespace cuspnorm;

namespace {

bool same_rows(const HarnessResult& a, const HarnessResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto &x = a.rows[i], &y = b.rows[i];
    if (x.N != y.N || x.M != y.M || x.L != y.L || x.z != y.z || x.lhs != y.lhs || x.rhs != y.rhs) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lemma names round trip") {
  for (Lemma k : all_lemmas()) CHECK(parse_lemma(to_string(k)) == k);
  CHECK_THROWS_AS(parse_lemma("eq8"), Error);
}

TEST_CASE("level ranges") {
  CHECK(parse_level_range("3..17") == std::pair<std::int64_t, std::int64_t>{3, 17});
  CHECK(parse_level_range("9") == std::pair<std::int64_t, std::int64_t>{9, 9});
  CHECK_THROWS_AS(parse_level_range("5..2"), Error);
  CHECK_THROWS_AS(parse_level_range("a..4"), Error);
  CHECK_THROWS_AS(parse_level_range("0..4"), Error);
  HarnessConfig bad;
  bad.samples = 0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("L rule") {
  CHECK(harness_L_values(Lemma::Eq1, 60, 2) == std::vector<std::int64_t>{4, 8});
  CHECK(harness_L_values(Lemma::Eq7, 8, 2) == std::vector<std::int64_t>{2, 4});
  CHECK(harness_L_values(Lemma::Ampl, 16, 2) == std::vector<std::int64_t>{6});
  CHECK(harness_L_values(Lemma::Ampl, 64, 2) == std::vector<std::int64_t>{4, 8});
  auto para = harness_L_values(Lemma::Para, 9, 3);
  CHECK(para.front() == 1);
  CHECK(para.back() == 49);
  for (auto l : para) CHECK(l % 3 == 1);
}

TEST_CASE("sampled points lie in G and respect the ampl height cap") {
  for (std::int64_t N : {1, 4, 12, 36, 50}) {
    for (std::int64_t M : arith::divisors(arith::squarefree_split(N).square_root)) {
      for (const auto& z : sample_points(Lemma::Eq1, N, M, 3, 11)) CHECK(is_in_G(z, N, M));
      for (const auto& z : sample_points(Lemma::Ampl, N, M, 3, 11)) {
        CHECK(is_in_G(z, N, M));
        CHECK(z.y * z.y * N <= 1);
      }
      CHECK(sample_points(Lemma::Eq2, N, M, 3, 5) == sample_points(Lemma::Eq2, N, M, 3, 5));
    }
  }
}

TEST_CASE("eq7 cell arithmetic") {
  PointH z(Rational(0), Rational(2));
  HarnessRow r = evaluate_cell(Lemma::Eq7, 4, 1, 2, z, Rational(1));
  Integer expect = classify_counts(z, 1, Rational(1), 4, 1).n_u + classify_counts(z, 2, Rational(1), 4, 1).n_u;
  REQUIRE(r.lhs_exact.has_value());
  CHECK(*r.lhs_exact == expect);
  Real rhs = 1 + sqrt(Real(2)) * 2 * 2 + 2 * 2;
  CHECK(abs(r.rhs - rhs) < Real("1e-50"));
}

TEST_CASE("para cells with non-square l vanish") {
  PointH z(Rational(1, 5), Rational(3, 2));
  for (std::int64_t l : {2, 3, 5, 6, 7, 8, 10}) {
    HarnessRow r = evaluate_cell(Lemma::Para, 4, 1, l, z, Rational(1));
    CHECK(*r.lhs_exact == 0);
    CHECK(r.ratio == 0);
  }
}

TEST_CASE("ampl cell composes the sum and the envelope") {
  PointH z(Rational(1, 8), Rational(7, 16));
  REQUIRE(is_in_G(z, 4, 1));
  HarnessRow r = evaluate_cell(Lemma::Ampl, 4, 1, 2, z, Rational(1));
  CHECK(r.lhs == amplified_count_sum(z, 2, Rational(1), 4, 1).value);
  CHECK(r.rhs == bound_rhs_ampl(4, 1, 2, z.y));
}

TEST_CASE("harness output does not depend on the job count") {
  for (Lemma k : {Lemma::Eq1, Lemma::Eq4, Lemma::Para}) {
    HarnessConfig cfg;
    cfg.lemma = k;
    cfg.N_lo = 1;
    cfg.N_hi = 20;
    cfg.samples = 2;
    cfg.seed = 3;
    auto a = run_harness(cfg);
    cfg.jobs = 4;
    auto b = run_harness(cfg);
    CHECK(same_rows(a, b));
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.argmax == b.argmax);
    CHECK(a.certificate_violations == 0);
  }
}

TEST_CASE("fixed M that does not fit is skipped") {
  HarnessConfig cfg;
  cfg.lemma = Lemma::Eq7;
  cfg.N_lo = 3;
  cfg.N_hi = 8;
  cfg.M = 2;
  auto r = run_harness(cfg);
  for (const auto& row : r.rows) CHECK(row.N % 4 == 0);
  CHECK(r.skipped.size() == 4);
}
