#pragma once

// Right cosets Gamma0(N;M) \ Delta(l,N;M): upper-triangular representatives,
// the pair method over bottom rows mod N, and stability under conjugation by
// a width-one sigma.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cuspnorm/modgroup.hpp"

namespace cuspnorm {

/// (a b; 0 d) with ad = l, a, d > 0, 0 <= b < d, sorted by (a, b).
std::vector<Mat2> hnf_reps(std::int64_t l);

/// The unique h from hnf_reps(det g) with g h^-1 in SL2(Z). Requires det g > 0.
Mat2 hnf_of(const Mat2& g);

struct CosetTable {
  std::int64_t l = 1;
  std::int64_t N = 1;
  std::int64_t M = 1;
  std::vector<Mat2> reps;
  std::string method;  // "pairs: bottom rows mod N up to units = 1 mod M, times hnf_reps(l)"
  std::int64_t bottom_row_classes = 0;  // index of Gamma0(N;M) in SL2(Z)
};

/// Throws Error(InvalidM) unless M | N, Error(InvalidArgument) unless l >= 1.
CosetTable coset_reps_delta(std::int64_t l, std::int64_t N, std::int64_t M);

/// Both in Delta(l,N;M): g2 g1^-1 in Gamma0(N;M).
bool same_coset(const Mat2& g1, const Mat2& g2, std::int64_t N, std::int64_t M);

/// A key that is equal exactly for matrices in the same right coset: the
/// upper-triangular factor h and the unit class of the bottom row of g h^-1 mod N.
std::tuple<std::int64_t, std::int64_t, Mat2> coset_key(const Mat2& g, std::int64_t N, std::int64_t M);

struct CosetCountVerdict {
  std::int64_t count_NM = 0;
  std::int64_t count_N = 0;
  bool equal = false;
};
CosetCountVerdict coset_count_invariance(std::int64_t l, std::int64_t N, std::int64_t M);

/// Uniformly scrambled element of Gamma0(N;M) (deterministic in the engine state).
Mat2 random_gamma0_NM(std::int64_t N, std::int64_t M, std::uint64_t& state, std::int64_t spread = 50);

struct ConjugationVerdict {
  bool pass = false;
  std::optional<Mat2> witness;   // gamma with sigma gamma sigma^-1 or sigma^-1 gamma sigma outside Delta
  std::int64_t checked = 0;
  bool hypothesis_met = true;    // l = 1 mod M
  std::string note;
};

/// Checks sigma g sigma^-1 and sigma^-1 g sigma against Delta(l,N;M) for every
/// coset representative and `budget` random Gamma0(N;M)-translates.
/// Throws Error(PrereqFailed) unless sigma in SL2(Z), M^2 | N and C(sigma) = N/M.
ConjugationVerdict conjugation_invariance(const Mat2& sigma, std::int64_t l, std::int64_t N, std::int64_t M,
                                          std::int64_t budget = 1000, std::uint64_t seed = 1);

/// {sigma g sigma^-1 : g in reps} is again a complete set of pairwise
/// inequivalent representatives.
bool conjugated_reps_valid(const Mat2& sigma, const CosetTable& table);

}  // namespace cuspnorm
