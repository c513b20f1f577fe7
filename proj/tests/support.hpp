#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "skewclust/graph.hpp"

namespace testing {

using skewclust::Digraph;
using skewclust::Edge;
using skewclust::Vertex;

/// Each ordered pair (u, v), u != v, is an edge with probability `density`.
/// Weights are 1 or uniform in [0.5, 3] when `weighted`.
inline Digraph random_digraph(int n, double density, std::uint64_t seed, bool weighted = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v && coin(rng) < density) edges.push_back({u, v, weighted ? weight(rng) : 1.0});
    }
  }
  return Digraph(n, std::move(edges));
}

/// Like random_digraph with integer weights in 1..max_weight, so every cut
/// sum is exact in floating point.
inline Digraph random_integer_digraph(int n, double density, std::uint64_t seed, int max_weight) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v && coin(rng) < density) edges.push_back({u, v, static_cast<double>(weight(rng))});
    }
  }
  return Digraph(n, std::move(edges));
}

/// Random oriented graph: every unordered pair is linked with probability
/// `density` and gets one direction by a fair coin.
inline Digraph random_oriented(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng) >= density) continue;
      if (coin(rng) < 0.5) {
        edges.push_back({u, v, 1.0});
      } else {
        edges.push_back({v, u, 1.0});
      }
    }
  }
  return Digraph(n, std::move(edges));
}

inline Digraph cycle3() { return Digraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}); }

inline Digraph single_edge(double w) { return Digraph(2, {{0, 1, w}}); }

inline Digraph two_cycles() {
  return Digraph(6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {5, 3, 1.0}});
}

/// Dense M - M^T straight from the edge list.
inline Eigen::MatrixXd dense_skew(const Digraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    k(e.u, e.v) += e.w;
    k(e.v, e.u) -= e.w;
  }
  return k;
}

inline Eigen::MatrixXd dense_adjacency(const Digraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) m(e.u, e.v) += e.w;
  return m;
}

/// Edge weight from x-side into y-side for the bipartition encoded by `in_x`.
inline double brute_cut(const Digraph& g, const std::vector<bool>& in_x, bool from_x) {
  double w = 0.0;
  for (const Edge& e : g.edges()) {
    const bool ux = in_x[static_cast<std::size_t>(e.u)];
    const bool vx = in_x[static_cast<std::size_t>(e.v)];
    if (ux != vx && ux == from_x) w += e.w;
  }
  return w;
}

/// Calls f(in_x) for every 2-partition {X, Y} with both sides non-empty,
/// each unordered partition once (the last vertex always lies in Y).
template <class F>
void for_each_bipartition(int n, F&& f) {
  std::vector<bool> in_x(static_cast<std::size_t>(n));
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    for (int i = 0; i < n; ++i) in_x[static_cast<std::size_t>(i)] = i < n - 1 && ((mask >> i) & 1U);
    f(in_x);
  }
}

/// Maximum |w(X,Y) - w(Y,X)| over all 2-partitions by enumeration.
inline double brute_max_tf(const Digraph& g) {
  double best = 0.0;
  for_each_bipartition(g.num_vertices(), [&](const std::vector<bool>& in_x) {
    best = std::max(best, std::abs(brute_cut(g, in_x, true) - brute_cut(g, in_x, false)));
  });
  return best;
}

/// Pairwise Euclidean distances between rows.
template <class Mat>
Eigen::MatrixXd row_distances(const Mat& x) {
  const auto n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  }
  return d;
}

/// ARI evaluated from its pair-counting definition: agreements over all
/// pairs, adjusted by the expected index under permutation.
inline double pair_count_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0.0;
  double in_a = 0.0;
  double in_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb ? 1.0 : 0.0;
      in_a += sa ? 1.0 : 0.0;
      in_b += sb ? 1.0 : 0.0;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return (both * pairs - in_a * in_b) / (0.5 * (in_a + in_b) * pairs - in_a * in_b);
}

/// Same partition up to relabeling.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace testing
