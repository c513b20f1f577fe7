#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "skewclust/errors.hpp"

namespace skewclust {

using Vertex = int;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted directed graph on vertices 0..n-1.
///
/// Construction normalizes the edge list: self-loops and zero weights are
/// dropped, parallel edges are summed, and the result is sorted by (u, v).
/// The adjacency matrix M (M_uv = w_uv) is kept in row-major form together
/// with its transpose so both out- and in-neighbourhoods are contiguous.
class Digraph {
 public:
  Digraph() = default;
  Digraph(Vertex n, std::vector<Edge> edges);

  Vertex num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const SparseMatrix& adjacency() const noexcept { return m_; }
  const SparseMatrix& adjacency_transpose() const noexcept { return mt_; }

  double out_degree(Vertex u) const { return out_degree_.at(static_cast<std::size_t>(u)); }
  double in_degree(Vertex u) const { return in_degree_.at(static_cast<std::size_t>(u)); }
  double total_weight() const noexcept { return total_weight_; }

  /// M_uv, or 0 when there is no edge u -> v.
  double weight(Vertex u, Vertex v) const;

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  SparseMatrix m_;
  SparseMatrix mt_;
  std::vector<double> out_degree_;
  std::vector<double> in_degree_;
  double total_weight_ = 0.0;
};

enum class Normalization { none, rw, sym };

Normalization parse_normalization(std::string_view name);
std::string_view to_string(Normalization norm);

/// The net-flow matrix K = M - M^T, optionally degree normalized.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  SkewMatrix(SparseMatrix k, Normalization tag) : k_(std::move(k)), tag_(tag) {}

  const SparseMatrix& matrix() const noexcept { return k_; }
  Normalization normalization() const noexcept { return tag_; }
  Vertex dimension() const noexcept { return static_cast<Vertex>(k_.rows()); }

  /// True for tag none and sym; the rw scaling D^-1 K breaks skew symmetry.
  bool is_skew_symmetric() const noexcept { return tag_ != Normalization::rw; }

 private:
  SparseMatrix k_;
  Normalization tag_ = Normalization::none;
};

/// d_u = sum_v |K_uv|.
using DegreeVector = Eigen::VectorXd;

struct Connectivity {
  bool connected = true;
  /// Vertex sets sorted by size descending, ties by smallest member; each
  /// set is sorted ascending.
  std::vector<std::vector<Vertex>> components;
};

class ZeroDegreeError : public DataError {
 public:
  explicit ZeroDegreeError(Vertex v);
  Vertex vertex() const noexcept { return vertex_; }

 private:
  Vertex vertex_;
};

SkewMatrix build_skew(const Digraph& g);

/// H_uv = i K_uv returned as the complex scalar (0, K_uv).
std::complex<double> hermitian_entry(const Digraph& g, Vertex u, Vertex v);

Connectivity weak_connectivity(const SkewMatrix& k);

DegreeVector degree_vector(const SkewMatrix& k);

/// D^-1 K (rw) or D^-1/2 K D^-1/2 (sym). Throws ZeroDegreeError when some
/// vertex has no net flow; restrict to a weak component first.
SkewMatrix normalize_skew(const SkewMatrix& k, Normalization mode);

/// Sum of weighted in- and out-degrees of `s`, measured on M.
double volume(const Digraph& g, std::span<const Vertex> s);

/// True when every vertex reaches every other along edge directions.
bool strongly_connected(const Digraph& g);

/// Subgraph induced by `vertices`; vertex vertices[i] becomes i.
Digraph induced_subgraph(const Digraph& g, std::span<const Vertex> vertices);

}  // namespace skewclust
