#pragma once

// Matrices of determinant l near a point: the region G(N;M), the family
// Delta(l,N;M), exact enumeration of {gamma : u(gamma z, z) <= delta}, the
// three-way classification, parabolic certificates and the amplified sum.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuspnorm/modgroup.hpp"

namespace cuspnorm {

/// det = l, N | c, a = 1 mod M.
bool in_delta(const Mat2& g, std::int64_t l, std::int64_t N, std::int64_t M);

/// y^2 >= 3 M^4 / (4 N^2) and the weighted lattice bound. Throws Error(InvalidM) unless M^2 | N.
bool is_in_G(const PointH& z, std::int64_t N, std::int64_t M);

struct EnumerationLimits {
  std::int64_t max_c_values = 5'000'000;  // number of admissible c before Error(BudgetExceeded)
};

/// Every gamma in Delta(l,N;M) with u(gamma z, z) <= delta, sorted by (c, a, d, b).
std::vector<Mat2> enumerate_delta_near(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N,
                                       std::int64_t M, const EnumerationLimits& limits = {});

enum class MatrixClass { Star, Unipotent, Parabolic };
MatrixClass classify(const Mat2& g, std::int64_t l);
const char* to_string(MatrixClass k);

struct CountReport {
  PointH z;
  std::int64_t l = 1;
  Rational delta;
  std::int64_t N = 1;
  std::int64_t M = 1;
  std::int64_t n_star = 0;
  std::int64_t n_u = 0;
  std::int64_t n_p = 0;
  std::vector<Mat2> star, unipotent, parabolic;  // filled only when requested

  std::int64_t total() const { return n_star + n_u + n_p; }
};

CountReport classify_counts(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N, std::int64_t M,
                            bool keep_matrices = false, const EnumerationLimits& limits = {});

struct ParabolicCertificate {
  Mat2 gamma;
  std::int64_t m = 0;        // m^2 = l
  int sign = 1;              // gamma' = sign * (m t; 0 m)
  bool scalar = false;       // gamma = +-mI, t = 0
  bool fixed_at_infinity = false;
  Rational fixed_point;      // (a - d) / (2c) when c != 0
  Mat2 tau;                  // tau(infinity) = fixed point
  Mat2 gamma_prime;          // tau^-1 gamma tau
  Integer t, t0, t1;         // t = t0 t1, t1 = (t, N^infinity)
  Integer c_tau, d_tau;      // bottom row of tau^-1
  Rational u;                // u(gamma z, z)
  bool divisibility_ok = false;  // N | c_tau^2 t
  bool claim_ok = false;         // t0^2 M^2 / N0^2 <= t^2 M^4 (c_tau, N/M^2)^2 / N^2, vacuous for t = 0
  bool paraeq_ok = false;        // u = t^2 |c_tau z + d_tau|^4 / (4 l y^2)

  bool ok() const { return divisibility_ok && claim_ok && paraeq_ok; }
};

ParabolicCertificate certify_parabolic(const Mat2& gamma, const PointH& z, std::int64_t l, std::int64_t N,
                                       std::int64_t M);
/// Empty when l is not a perfect square.
std::vector<ParabolicCertificate> parabolic_certify(const PointH& z, std::int64_t l, const Rational& delta,
                                                    std::int64_t N, std::int64_t M);

struct AmplifierWeights {
  std::int64_t Lambda = 1;
  std::int64_t M = 1;
  std::vector<std::int64_t> primes;        // Lambda < p < 2 Lambda, p = 1 mod M
  std::map<std::int64_t, Rational> weight;  // l -> y_l on the support
};

/// y_1 = Lambda/M; y_l = 1 for l in {l1, l1 l2, l1 l2^2, l1^2 l2^2}, l1, l2 in the prime set (l1 = l2 allowed).
AmplifierWeights amplifier_weights(std::int64_t Lambda, std::int64_t M);

struct AmplifiedTerm {
  std::int64_t l = 1;
  Rational y_l;
  CountReport counts;
};

struct AmplifiedSum {
  AmplifierWeights weights;
  std::vector<AmplifiedTerm> terms;
  Real value;  // sum y_l N(z, l, delta, N; M) / sqrt(l)
  std::vector<std::string> warnings;
};

AmplifiedSum amplified_count_sum(const PointH& z, std::int64_t Lambda, const Rational& delta, std::int64_t N,
                                 std::int64_t M, const EnumerationLimits& limits = {});

/// Lambda/M + Lambda^2 y N0 / M^3 + Lambda^{5/2} / (M^2 sqrt N) + Lambda^4 / (M N).
Real bound_rhs_ampl(std::int64_t N, std::int64_t M, std::int64_t Lambda, const Rational& y);

// ---- rank-two lattice utility ----------------------------------------------

struct Vec2Q {
  Rational x, y;
};

struct LatticeDiscCount {
  std::int64_t count = 0;
  Rational lambda1_sq;  // squared length of a shortest nonzero vector
  Rational covolume;    // |det(b1, b2)|
  Real envelope;        // 1 + R/lambda1 + R^2/covolume
};

/// Reduces the basis (Lagrange-Gauss) and counts lattice points in the closed
/// disc of radius sqrt(R2) around `centre`.
LatticeDiscCount lattice_disc_count(const Vec2Q& b1, const Vec2Q& b2, const Vec2Q& centre, const Rational& R2);
Rational shortest_vector_sq(Vec2Q b1, Vec2Q b2);

}  // namespace cuspnorm
