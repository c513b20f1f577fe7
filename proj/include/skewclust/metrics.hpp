#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "skewclust/graph.hpp"
#include "skewclust/kmeans.hpp"

namespace skewclust {

/// w(X, Y): total weight of edges from x into y. Throws on overlap.
double cut_weight(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y);

/// Cut imbalance w(X,Y) / (w(X,Y) + w(Y,X)); DataError when no edge crosses.
double ci(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y);

/// Trade flow |w(X,Y) - w(Y,X)|.
double tf(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y);

/// |CI - 1/2| * min(vol X, vol Y); 0 when no edge crosses.
double ci_vol(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y);

/// |CI - 1/2| * min(|X|, |Y|); 0 when no edge crosses.
double ci_sz(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y);

enum class CiMode { vol, sz };

struct CutScore {
  int a = 0;  // a < b
  int b = 0;
  double value = 0.0;
};

/// total is the sum of the c best scores; cuts ranks every unordered
/// cluster pair, ties in lexicographic pair order.
struct TopScore {
  double total = 0.0;
  std::vector<CutScore> cuts;
};

/// F(a, b) = w(A_a, A_b) for the clusters of p.
Eigen::MatrixXd cluster_flow_matrix(const Digraph& g, const Partition& p);

TopScore top_tf(const Digraph& g, const Partition& p, int c);
TopScore top_ci(const Digraph& g, const Partition& p, int c, CiMode mode);

struct ExactTf {
  double value = 0.0;
  std::vector<Vertex> x;  // increasing; y is the complement
};

/// Maximum trade flow over all 2-partitions, from the row sums of K.
ExactTf exact_tf_k2(const Digraph& g);

/// Adjusted Rand index. Returns 1 when both partitions are trivial in the
/// same way (zero denominator).
double ari(std::span<const int> a, std::span<const int> b);
double ari(const Partition& a, const Partition& b);

}  // namespace skewclust
