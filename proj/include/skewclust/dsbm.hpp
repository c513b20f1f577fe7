#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "skewclust/graph.hpp"
#include "skewclust/kmeans.hpp"

namespace skewclust {

/// Directed stochastic block model. A pair {u, v} is linked with probability
/// p (same cluster) or q (different clusters) and then oriented u -> v with
/// probability F(a, b) for clusters a of u and b of v.
struct DsbmParams {
  int k = 0;
  double p = 0.0;
  double q = 0.0;
  std::vector<int> sizes;  // contiguous blocks: cluster 0 is vertices 0..sizes[0]-1
  Eigen::MatrixXd f;       // F(a, a) = 1/2, F(a, b) + F(b, a) = 1
  std::uint64_t seed = 0;
};

struct DsbmInstance {
  Digraph graph;
  Partition truth;
  DsbmParams params;
};

enum class MetaPattern { circulant, dag, cmg };

MetaPattern parse_meta_pattern(std::string_view name);
std::string_view to_string(MetaPattern pattern);

/// Directed k-cycle of clusters: F(a, a+1 mod k) = 1 - mu, other pairs 1/2.
Eigen::MatrixXd meta_circulant(int k, double mu);

/// F(a, a+1) = F(a, a+2) = mu, the mirrored entries 1 - mu, other pairs 1/2.
Eigen::MatrixXd meta_dag(int k, double mu);

/// Every pair oriented by a fair coin drawn from `seed`.
Eigen::MatrixXd meta_cmg(int k, double mu, std::uint64_t seed);

Eigen::MatrixXd meta_matrix(MetaPattern pattern, int k, double mu, std::uint64_t seed);

/// n split into k sizes differing by at most one, larger blocks first.
std::vector<int> equal_sizes(int n, int k);

/// Throws std::invalid_argument when a model invariant fails.
void validate(const DsbmParams& params);

DsbmInstance generate(const DsbmParams& params);

}  // namespace skewclust
