#pragma once

// Sweeps over (N, M, L, z) cells comparing exact counts against the lemma
// envelopes with every N^eps factor set to 1. Cells are independent and may
// run on several threads; rows come back in canonical order.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuspnorm/counting.hpp"

namespace cuspnorm {

enum class Lemma { Eq1, Eq2, Eq3, Eq4, Eq5, Eq6, Eq7, Para, Ampl };

const char* to_string(Lemma k);
/// Throws Error(ConfigError) on an unknown name.
Lemma parse_lemma(std::string_view name);
std::vector<Lemma> all_lemmas();

struct HarnessConfig {
  Lemma lemma = Lemma::Eq1;
  std::int64_t N_lo = 1;
  std::int64_t N_hi = 12;
  Rational delta{1};
  int samples = 2;              // points per (N, M)
  std::uint64_t seed = 1;
  int jobs = 1;
  std::optional<std::int64_t> M;  // default: every M with M^2 | N
  std::optional<std::int64_t> L;  // default: the L (or Lambda) rule below
  int max_attempts = 400;       // rejection-sampling tries per point
  EnumerationLimits limits;
};

/// Parses "A..B" or a single integer. Throws Error(ConfigError).
std::pair<std::int64_t, std::int64_t> parse_level_range(std::string_view text);
/// Throws Error(ConfigError) when ranges or counts are malformed.
void validate(const HarnessConfig& cfg);

/// L values used for one (N, M): base = max(lower, ceil(N^{1/3})) and 2 base,
/// where lower is M^2 for eq1-eq3 and ampl and M for eq4-eq7. For para the
/// "L" column is the determinant l itself, running over l <= 49 with l = 1 mod M.
std::vector<std::int64_t> harness_L_values(Lemma lemma, std::int64_t N, std::int64_t M,
                                           const std::optional<std::int64_t>& fixed = std::nullopt);

/// Seeded rejection sampler for points of G(N;M). y is log-uniform on a grid
/// of step 1/(16N) between sqrt(3) M^2 / (2N) and 2 (N^{-1/2} for ampl).
/// Deterministic in (seed, N, M, lemma). Points that are never accepted are dropped.
std::vector<PointH> sample_points(Lemma lemma, std::int64_t N, std::int64_t M, int count, std::uint64_t seed,
                                  int max_attempts = 400);

struct HarnessRow {
  Lemma lemma = Lemma::Eq1;
  std::int64_t N = 1;
  std::int64_t M = 1;
  std::int64_t L = 1;
  int sample = 0;
  Rational delta;
  PointH z;
  std::optional<Integer> lhs_exact;  // set for pure counts
  Real lhs;
  Real rhs;
  Real ratio;
  std::int64_t certificate_violations = 0;  // para only
};

struct HarnessSkip {
  std::int64_t N = 1;
  std::int64_t M = 1;
  std::string reason;
};

struct HarnessResult {
  HarnessConfig config;
  std::vector<HarnessRow> rows;
  std::vector<HarnessSkip> skipped;
  std::optional<std::size_t> argmax;  // row with the largest ratio
  Real max_ratio;
  std::int64_t certificate_violations = 0;
};

/// Exact LHS and envelope RHS for one cell.
HarnessRow evaluate_cell(Lemma lemma, std::int64_t N, std::int64_t M, std::int64_t L, const PointH& z,
                         const Rational& delta, const EnumerationLimits& limits = {});

HarnessResult run_harness(const HarnessConfig& cfg);

}  // namespace cuspnorm
