#include <doctest.h>
#include <algorithm>

#include "cuspnorm/error.hpp"
#include "cuspnorm/json_io.hpp"
#include "gen.hpp"

using namespace cuspnorm;
using json_io::json;

TEST_CASE("scalars and matrices round-trip") {
  gen::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Rational q = rng.rational(1000, 1000);
    CHECK(json_io::rational_from_json(json::parse(json_io::to_json(q).dump())) == q);
    const PointH z = rng.point();
    CHECK(json_io::point_from_json(json::parse(json_io::to_json(z).dump())) == z);
  }
  const Integer huge("123456789012345678901234567890");
  const Mat2 m{huge, Integer(-3), Integer(7), Integer(0)};
  const json j = json_io::to_json(m);
  CHECK(j[0][0].is_string());
  CHECK(j[0][1].is_number_integer());
  CHECK(json_io::mat_from_json(json::parse(j.dump())) == m);
  CHECK_THROWS_AS(json_io::mat_from_json(json::parse("[[1,2],[3]]")), Error);
  CHECK_THROWS_AS(json_io::point_from_json(json::parse(R"({"x":"0","y":"-1"})")), Error);
}

TEST_CASE("domain types round-trip") {
  const auto cusps = enumerate_cusps(36);
  const auto back = json_io::cusps_from_json(json_io::cusps_to_json(36, cusps));
  REQUIRE(back.size() == cusps.size());
  for (std::size_t i = 0; i < cusps.size(); ++i) {
    CHECK(back[i].a == cusps[i].a);
    CHECK(back[i].c == cusps[i].c);
    CHECK(back[i].width == cusps[i].width);
    CHECK(back[i].tau == cusps[i].tau);
  }

  const CountReport r = classify_counts(PointH(Rational(1, 5), Rational(2, 3)), 4, Rational(1), 4, 1, true);
  const CountReport rb = json_io::count_from_json(json::parse(json_io::to_json(r).dump()));
  CHECK(rb.n_star == r.n_star);
  CHECK(rb.n_u == r.n_u);
  CHECK(rb.n_p == r.n_p);
  CHECK(rb.parabolic == r.parabolic);
  CHECK(rb.z == r.z);

  const CosetTable t = coset_reps_delta(5, 9, 3);
  const CosetTable tb = json_io::coset_table_from_json(json::parse(json_io::to_json(t).dump()));
  CHECK(tb.reps == t.reps);
  CHECK(tb.bottom_row_classes == t.bottom_row_classes);

  const GapReduction g = gap_reduce(PointH(Rational(3, 7), Rational(1, 20)), 18);
  const GapReduction gb = json_io::reduction_from_json(json::parse(json_io::to_json(g).dump()));
  CHECK(gb.sigma == g.sigma);
  CHECK(gb.z_prime == g.z_prime);
  CHECK(gb.gap.ratio == g.gap.ratio);
  CHECK(gb.al.W == g.al.W);
  CHECK(json_io::to_json(gb)["checks"] == json_io::to_json(g)["checks"]);

  for (auto which : {TheoremCase::Main, TheoremCase::Case2}) {
    const DerivationReport d = theorem_pipeline(which);
    const json dj = json_io::to_json(d);
    const DerivationReport db = json_io::derivation_from_json(json::parse(dj.dump()));
    CHECK(pl_equal(db.exponent, d.exponent));
    CHECK(db.worst_exponent == d.worst_exponent);
    CHECK(db.steps.size() == d.steps.size());
    CHECK(json_io::to_json(db) == dj);
  }
}

TEST_CASE("harness round-trip") {
  HarnessConfig cfg;
  cfg.lemma = Lemma::Para;
  cfg.N_lo = 4;
  cfg.N_hi = 9;
  const HarnessResult r = run_harness(cfg);
  const json j = json_io::to_json(r);
  const HarnessResult b = json_io::harness_from_json(json::parse(j.dump()));
  REQUIRE(b.rows.size() == r.rows.size());
  CHECK(b.argmax == r.argmax);
  CHECK(json_io::to_json(b) == j);
  const std::string csv = json_io::harness_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size()) + 2);
}
