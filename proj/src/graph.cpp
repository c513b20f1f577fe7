#include "skewclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace skewclust {

namespace {

SparseMatrix from_triplets(Vertex rows, Vertex cols, const std::vector<Eigen::Triplet<double>>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

class DisjointSets {
 public:
  explicit DisjointSets(Vertex n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

Digraph::Digraph(Vertex n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw std::out_of_range("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                              ") outside vertex range 0.." + std::to_string(n - 1));
    }
    if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
      throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") has negative or non-finite weight");
    }
  }
  std::erase_if(edges, [](const Edge& e) { return e.u == e.v || e.w == 0.0; });
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().w += e.w;
    } else {
      edges_.push_back(e);
    }
  }

  out_degree_.assign(static_cast<std::size_t>(n), 0.0);
  in_degree_.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(edges_.size());
  for (const Edge& e : edges_) {
    t.emplace_back(e.u, e.v, e.w);
    out_degree_[e.u] += e.w;
    in_degree_[e.v] += e.w;
    total_weight_ += e.w;
  }
  m_ = from_triplets(n, n, t);
  mt_ = SparseMatrix(m_.transpose());
  mt_.makeCompressed();
}

double Digraph::weight(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("vertex index out of range");
  return m_.coeff(u, v);
}

Normalization parse_normalization(std::string_view name) {
  if (name == "none") return Normalization::none;
  if (name == "rw") return Normalization::rw;
  if (name == "sym") return Normalization::sym;
  throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

std::string_view to_string(Normalization norm) {
  switch (norm) {
    case Normalization::none: return "none";
    case Normalization::rw: return "rw";
    case Normalization::sym: return "sym";
  }
  return "none";
}

ZeroDegreeError::ZeroDegreeError(Vertex v)
    : DataError("vertex " + std::to_string(v) +
                " has zero net-flow degree; restrict to a weakly connected component first"),
      vertex_(v) {}

SkewMatrix build_skew(const Digraph& g) {
  // Each unordered pair contributes net = M_uv - M_vu once; equal reciprocal
  // weights cancel and are not stored.
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.num_edges());
  for (const Edge& e : g.edges()) {
    const double back = g.adjacency().coeff(e.v, e.u);
    if (back != 0.0 && e.v < e.u) continue;  // handled from the (v, u) edge
    const double net = e.w - back;
    if (net == 0.0) continue;
    t.emplace_back(e.u, e.v, net);
    t.emplace_back(e.v, e.u, -net);
  }
  return SkewMatrix(from_triplets(g.num_vertices(), g.num_vertices(), t), Normalization::none);
}

std::complex<double> hermitian_entry(const Digraph& g, Vertex u, Vertex v) {
  const Vertex n = g.num_vertices();
  if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("vertex index out of range");
  return {0.0, g.weight(u, v) - g.weight(v, u)};
}

Connectivity weak_connectivity(const SkewMatrix& k) {
  const SparseMatrix& a = k.matrix();
  const Vertex n = static_cast<Vertex>(a.rows());
  DisjointSets sets(n);
  for (Vertex u = 0; u < n; ++u) {
    for (SparseMatrix::InnerIterator it(a, u); it; ++it) {
      if (it.value() != 0.0) sets.unite(u, static_cast<Vertex>(it.col()));
    }
  }
  std::vector<Vertex> root_slot(static_cast<std::size_t>(n), -1);
  Connectivity out;
  for (Vertex u = 0; u < n; ++u) {
    const Vertex r = sets.find(u);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<Vertex>(out.components.size());
      out.components.emplace_back();
    }
    out.components[root_slot[r]].push_back(u);
  }
  // Components were created in order of smallest member, so a stable sort by
  // size gives the documented tie-break.
  std::stable_sort(out.components.begin(), out.components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  out.connected = out.components.size() <= 1;
  return out;
}

DegreeVector degree_vector(const SkewMatrix& k) {
  const SparseMatrix& a = k.matrix();
  DegreeVector d = DegreeVector::Zero(a.rows());
  for (Eigen::Index u = 0; u < a.outerSize(); ++u) {
    for (SparseMatrix::InnerIterator it(a, u); it; ++it) d[u] += std::abs(it.value());
  }
  return d;
}

SkewMatrix normalize_skew(const SkewMatrix& k, Normalization mode) {
  if (mode == Normalization::none) return k;
  if (k.normalization() != Normalization::none) {
    throw std::invalid_argument("matrix is already normalized");
  }
  const DegreeVector d = degree_vector(k);
  for (Eigen::Index u = 0; u < d.size(); ++u) {
    if (d[u] == 0.0) throw ZeroDegreeError(static_cast<Vertex>(u));
  }
  SparseMatrix out = k.matrix();
  for (Eigen::Index u = 0; u < out.outerSize(); ++u) {
    for (SparseMatrix::InnerIterator it(out, u); it; ++it) {
      if (mode == Normalization::rw) {
        it.valueRef() /= d[u];
      } else {
        it.valueRef() /= std::sqrt(d[u] * d[it.col()]);
      }
    }
  }
  return SkewMatrix(std::move(out), mode);
}

double volume(const Digraph& g, std::span<const Vertex> s) {
  double vol = 0.0;
  for (Vertex u : s) vol += g.out_degree(u) + g.in_degree(u);
  return vol;
}

namespace {

bool reaches_all(const SparseMatrix& a) {
  const auto n = static_cast<Vertex>(a.rows());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  Vertex count = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (SparseMatrix::InnerIterator it(a, u); it; ++it) {
      const auto v = static_cast<Vertex>(it.col());
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

}  // namespace

bool strongly_connected(const Digraph& g) {
  if (g.num_vertices() <= 1) return true;
  return reaches_all(g.adjacency()) && reaches_all(g.adjacency_transpose());
}

Digraph induced_subgraph(const Digraph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> index(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex v = vertices[i];
    if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("vertex index out of range");
    if (index[v] >= 0) throw std::invalid_argument("duplicate vertex in induced subgraph");
    index[v] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (index[e.u] >= 0 && index[e.v] >= 0) edges.push_back({index[e.u], index[e.v], e.w});
  }
  return Digraph(static_cast<Vertex>(vertices.size()), std::move(edges));
}

}  // namespace skewclust
