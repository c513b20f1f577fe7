#pragma once

#include <cstdint>
#include <vector>

#include "skewclust/linalg.hpp"

namespace skewclust {

/// assignment[u] in 0..k-1; every cluster non-empty.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  int size() const noexcept { return static_cast<int>(assignment.size()); }
  std::vector<int> cluster_sizes() const;
  /// Vertices of each cluster in increasing order.
  std::vector<std::vector<Vertex>> clusters() const;
};

/// Relabels clusters in order of first occurrence. k becomes the number of
/// distinct labels.
Partition canonicalize(Partition p);

/// Builds a partition from arbitrary nonnegative labels.
Partition make_partition(std::vector<int> labels);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
  double tol = 1e-6;  // max centroid displacement at convergence
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Partition partition;  // canonical labels
  double inertia = 0.0;
  int iterations = 0;       // Lloyd iterations of the winning restart
  int restarts_used = 0;
  std::vector<double> trace;  // inertia after each assignment step of the winning restart
};

KMeansResult kmeans(const Embedding& points, int k, const KMeansOptions& opts = {});

/// Sum of squared distances of each point to the mean of its cluster.
double partition_inertia(const Embedding& points, const Partition& p);

}  // namespace skewclust
