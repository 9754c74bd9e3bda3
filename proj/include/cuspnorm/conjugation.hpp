#pragma once

// Atkin-Lehner operators, conjugation of an arbitrary cusp to one of width 1,
// and the height gain that comes with it (with an exact certificate check).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspnorm/modgroup.hpp"

namespace cuspnorm {

struct AtkinLehnerOp {
  Mat2 W;
  std::vector<std::int64_t> S;  // ascending
  std::int64_t N_S = 1;
};

/// W = (N_S*alpha, beta; N, N_S) with alpha the least positive solution of
/// N_S*alpha = 1 mod N/N_S. Identity when S is empty.
/// Throws Error(InvalidPrimeSet) if some p in S is not a prime divisor of N.
AtkinLehnerOp atkin_lehner_matrix(std::int64_t N, std::vector<std::int64_t> S);

/// det W = N_S, the two congruence patterns, and W^2 = N_S * gamma with gamma in Gamma0(N).
bool verify_atkin_lehner(const AtkinLehnerOp& op, std::int64_t N);

/// Lower-left entry divisible by N, diagonal = 1 mod M, determinant 1.
bool in_gamma0_NM(const Mat2& g, std::int64_t N, std::int64_t M);

struct GapVerdict {
  bool pass = false;
  Integer worst_c;  // pair with the smallest lhs/rhs among those searched
  Integer worst_d;
  Rational lhs;     // |c z' + d|^2
  Rational rhs;     // 3 M^2 gcd(c, N/M^2) / (4N)
  Rational ratio;   // lhs / rhs
  std::int64_t pairs_checked = 0;
};

/// Decides |cz+d|^2 >= 3 M^2 gcd(c, N/M^2)/(4N) for every (c, d) != (0, 0).
/// Only pairs with c^2 y^2 < 3/4 can fail, so the search is finite.
/// Throws Error(InvalidM) unless M^2 | N, Error(BudgetExceeded) if more than
/// `max_c` values of c would be scanned.
GapVerdict verify_gap_certificate(const PointH& z, std::int64_t N, std::int64_t M,
                                  std::int64_t max_c = 10'000'000);

/// The bound the height argument actually delivers for the constructed point:
/// |cz+d|^2 >= 3 / (4 n2^2) with n2 = N_S / gcd(c M1^2, N_S).
GapVerdict verify_corrected_gap(const PointH& z, std::int64_t N_S, std::int64_t M1,
                                std::int64_t max_c = 10'000'000);

struct Check {
  std::string name;
  bool ok = false;
};

struct ReductionCertificate {
  std::int64_t N = 1;
  Mat2 tau;
  AtkinLehnerOp al;
  std::int64_t M1 = 1;
  std::int64_t M = 1;
  Integer u;   // n = (1 u/M1; 0 1)
  Mat2Q n;
  Mat2 sigma;
  bool used_fallback = false;  // u found by scanning instead of by CRT
  std::vector<Check> checks;

  bool all_ok() const;
};

/// Builds sigma = W tau n diag(1/M1, M1/N_S) in SL2(Z) with C(sigma) = N/M
/// and re-checks every claimed property.
/// Throws Error(NotUnimodular) or Error(InternalSolveFailure).
ReductionCertificate width_one_conjugate(const Mat2& tau, std::int64_t N);

struct GapReduction {
  std::int64_t N = 1;
  PointH z;
  PointH z0;  // z = tau z0
  Mat2 tau;

  // The direct construction from tau.
  ReductionCertificate construction;
  PointH construction_z_prime;
  GapVerdict construction_gap;  // the stated lattice bound at the constructed point
  GapVerdict corrected_gap;     // verify_corrected_gap at the constructed point

  // The reported choice. Equal to the construction unless its lattice check
  // failed, in which case the alternatives h W_S z are searched.
  std::string method;  // "construction", "search" or "none"
  AtkinLehnerOp al;
  Mat2 sigma;
  std::int64_t M = 1;
  PointH z_prime;  // sigma^-1 W z
  GapVerdict gap;
  std::int64_t candidates_scanned = 0;
  std::vector<Check> checks;

  /// Every check, including the stated lattice bound for the reported choice.
  bool all_ok() const;
};

/// fd_reduce, width_one_conjugate, then z' = sigma^-1 W z with the height
/// and lattice bounds verified exactly. `max_candidates` caps the search.
GapReduction gap_reduce(const PointH& z, std::int64_t N, std::int64_t max_candidates = 2'000'000);

}  // namespace cuspnorm
