#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewclust/graph.hpp"
#include "skewclust/kmeans.hpp"
#include "skewclust/linalg.hpp"

namespace skewclust {

enum class Method { skew_f, skew_r, skew_s, herm, herm_dense, dd_sym, svd_m, bcs };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);
std::vector<Method> all_methods();

struct ClusterSpec {
  Method method = Method::skew_f;
  int k = 2;
  /// skew_r embedding width in real singular vectors; must be even.
  std::optional<int> l_override;
  double alpha = 0.5;       // dd_sym
  std::optional<int> d;     // svd_m, defaults to k
  Normalization normalization = Normalization::none;
  std::uint64_t seed = 0;
  /// bcs teleportation; unset picks 0.01 when the graph is not strongly
  /// connected and 0 otherwise.
  std::optional<double> tau;
  /// skew_s search window; 0 means 2k + 2.
  int search_cap = 0;
  bool restrict_to_giant_component = true;
  int kmeans_restarts = 10;
};

struct Flags {
  bool gap_degenerate = false;
  bool regularized = false;
  bool restricted_to_giant_component = false;
  /// rw normalization requested for a method whose embedding assumes a
  /// skew-symmetric matrix; the left singular vectors of D^-1 K were used.
  bool non_normal = false;

  /// "a|b" list of the set flags, empty when none.
  std::string str() const;
};

struct TimedPartition {
  Partition partition;           // over `vertices`
  std::vector<Vertex> vertices;  // original index of each clustered vertex
  double setup_ms = 0.0;
  double embed_ms = 0.0;
  double kmeans_ms = 0.0;
  int embed_dim = 0;
  Flags flags;
  /// Singular values, eigenvalues, or selected bcs eigenvalues behind the
  /// embedding.
  std::vector<std::complex<double>> spectrum;
  double inertia = 0.0;

  double total_ms() const noexcept { return setup_ms + embed_ms + kmeans_ms; }
  /// Cluster of each original vertex, -1 for vertices that were dropped.
  std::vector<int> full_assignment(Vertex n) const;
};

/// Embedding plus the spectral data it came from.
struct SpectralEmbedding {
  Embedding coords;
  Flags flags;
  std::vector<std::complex<double>> spectrum;
};

/// Left singular vectors of K for the leading l singular values.
SpectralEmbedding skew_embedding(const SkewMatrix& k, int l, std::uint64_t seed);

/// Schur basis [q_odd_1 q_even_1 ...] of the leading l/2 pairs of K.
SpectralEmbedding herm_embedding(const SkewMatrix& k, int l, std::uint64_t seed);

/// Rows of the projector P = Q~ Q~^T.
SpectralEmbedding herm_dense_embedding(const SkewMatrix& k, int l, std::uint64_t seed);

/// Leading k eigenvectors of alpha M M^T + (1 - alpha) M^T M, or of its
/// degree-normalized form D^-1 A when `normalized`.
SpectralEmbedding dd_sym_embedding(const Digraph& g, int k, double alpha, bool normalized, std::uint64_t seed);

/// [U S^1/2, V S^1/2] from the d leading singular triplets of M.
SpectralEmbedding svd_m_embedding(const Digraph& g, int d, std::uint64_t seed);

/// [Re G, Im G] for the floor(k/2) eigenvectors of the transition matrix
/// with largest modulus among eigenvalues with Re < 1, Im >= 0.
SpectralEmbedding bcs_embedding(const Digraph& g, int k, std::optional<double> tau);

/// Even cut l maximizing sigma_l - sigma_{l+1} (1-based) over l = 2, 4, ...,
/// m - 1; ties go to the smaller l. `degenerate` is set when the best gap is
/// at most tol * sigma_1.
int select_gap_cut(const Eigen::VectorXd& sigma, bool& degenerate, double tol = tolerance::pair);

/// Optimum of the real relaxation of two-way trade flow maximization.
struct Relaxation {
  double sigma1 = 0.0;
  Eigen::VectorXd u1;
  Eigen::VectorXd v1;
};

Relaxation trade_flow_relaxation(const Digraph& g);

/// Runs the pipeline selected by spec.method.
TimedPartition cluster(const Digraph& g, const ClusterSpec& spec);

TimedPartition skew_f(const Digraph& g, int k, Normalization norm, std::uint64_t seed);
TimedPartition skew_r(const Digraph& g, int k, int l, Normalization norm, std::uint64_t seed);
TimedPartition skew_s(const Digraph& g, int k, Normalization norm, std::uint64_t seed, int search_cap = 0);
TimedPartition herm(const Digraph& g, int k, Normalization norm, std::uint64_t seed);
TimedPartition herm_dense(const Digraph& g, int k, Normalization norm, std::uint64_t seed);
TimedPartition dd_sym(const Digraph& g, int k, double alpha, bool normalized, std::uint64_t seed);
TimedPartition svd_m(const Digraph& g, int k, int d, std::uint64_t seed);
TimedPartition bcs(const Digraph& g, int k, std::uint64_t seed, std::optional<double> tau = std::nullopt);

}  // namespace skewclust
