#pragma once

// Independent reference computations used only by tests. Each one avoids the
// formula or shortcut that the library code relies on.

#include <cstdint>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "cuspnorm/modgroup.hpp"

namespace oracle {

using cuspnorm::Integer;
using cuspnorm::Mat2;
using cuspnorm::PointH;
using cuspnorm::Rational;

struct UnionFind {
  std::vector<std::int64_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int64_t find(std::int64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::int64_t x, std::int64_t y) { parent[find(x)] = find(y); }
};

inline std::int64_t md(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// Orbit labels of primitive pairs (c, d) mod N under (c, d) -> (c, c + d) and
/// scalar units. Bottom rows of SL2(Z) modulo Gamma0(N) on the left and
/// translations on the right, i.e. the cusps.
struct CuspOrbits {
  std::int64_t N;
  UnionFind uf;
  explicit CuspOrbits(std::int64_t n) : N(n), uf(static_cast<std::size_t>(n * n)) {
    for (std::int64_t c = 0; c < N; ++c) {
      for (std::int64_t d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1) continue;
        uf.join(idx(c, d), idx(c, md(c + d, N)));
        for (std::int64_t u = 1; u < N; ++u) {
          if (std::gcd(u, N) == 1) uf.join(idx(c, d), idx(md(u * c, N), md(u * d, N)));
        }
      }
    }
  }
  std::int64_t idx(std::int64_t c, std::int64_t d) const { return (N == 1) ? 0 : c * N + d; }
  std::int64_t label(const Mat2& tau) {
    std::int64_t c = md(cuspnorm::to_int64(cuspnorm::mod(tau.c, Integer(static_cast<long>(N)))), N);
    std::int64_t d = md(cuspnorm::to_int64(cuspnorm::mod(tau.d, Integer(static_cast<long>(N)))), N);
    return uf.find(idx(c, d));
  }
  std::int64_t count() {
    std::set<std::int64_t> roots;
    for (std::int64_t c = 0; c < N; ++c) {
      for (std::int64_t d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) == 1) roots.insert(uf.find(idx(c, d)));
      }
    }
    if (N == 1) return 1;
    return static_cast<std::int64_t>(roots.size());
  }
};

/// Every integer matrix with |a|,|c|,|d| <= B, det l, lower-left = 0 mod N,
/// a = 1 mod M and u(gz, z) <= delta. For c != 0, b is forced by the
/// determinant; for c = 0 it is scanned over [-B, B] as well.
inline std::vector<Mat2> box_delta(const PointH& z, std::int64_t l, const Rational& delta, std::int64_t N,
                                   std::int64_t M, std::int64_t B) {
  std::vector<Mat2> out;
  for (std::int64_t c = -B; c <= B; ++c) {
    if (c % N != 0) continue;
    for (std::int64_t a = -B; a <= B; ++a) {
      if (md(a - 1, M) != 0) continue;
      for (std::int64_t d = -B; d <= B; ++d) {
        std::vector<std::int64_t> bs;
        if (c != 0) {
          std::int64_t num = a * d - l;
          if (num % c == 0) bs.push_back(num / c);
        } else if (a * d == l) {
          for (std::int64_t b = -B; b <= B; ++b) bs.push_back(b);
        }
        for (std::int64_t b : bs) {
          Mat2 g = cuspnorm::make_mat(a, b, c, d);
          if (cuspnorm::point_pair_u(cuspnorm::mobius_act(g, z), z) <= delta) out.push_back(g);
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
