#include "skewclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace skewclust {

namespace {

// side[u]: 0 outside, 1 in x, 2 in y.
std::vector<char> mark_sides(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  std::vector<char> side(static_cast<std::size_t>(g.num_vertices()), 0);
  auto mark = [&](std::span<const Vertex> s, char tag) {
    for (Vertex u : s) {
      if (u < 0 || u >= g.num_vertices()) throw std::out_of_range("vertex " + std::to_string(u) + " out of range");
      char& cur = side[static_cast<std::size_t>(u)];
      if (cur != 0 && cur != tag) throw std::invalid_argument("vertex sets overlap at " + std::to_string(u));
      cur = tag;
    }
  };
  mark(x, 1);
  mark(y, 2);
  return side;
}

struct Flows {
  double xy = 0.0;
  double yx = 0.0;
};

Flows flows(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  const auto side = mark_sides(g, x, y);
  Flows f;
  for (const Edge& e : g.edges()) {
    const char su = side[static_cast<std::size_t>(e.u)];
    const char sv = side[static_cast<std::size_t>(e.v)];
    if (su == 1 && sv == 2) f.xy += e.w;
    if (su == 2 && sv == 1) f.yx += e.w;
  }
  return f;
}

double imbalance_score(const Flows& f, double weight) {
  const double total = f.xy + f.yx;
  if (total == 0.0) return 0.0;
  return std::abs(f.xy / total - 0.5) * weight;
}

TopScore rank(std::vector<CutScore> cuts, int c) {
  const auto pairs = static_cast<int>(cuts.size());
  if (c < 1 || c > pairs) {
    throw std::invalid_argument("c = " + std::to_string(c) + " outside 1.." + std::to_string(pairs));
  }
  // Input is in lexicographic pair order, so a stable sort keeps ties there.
  std::ranges::stable_sort(cuts, [](const CutScore& l, const CutScore& r) { return l.value > r.value; });
  TopScore out;
  for (int i = 0; i < c; ++i) out.total += cuts[static_cast<std::size_t>(i)].value;
  out.cuts = std::move(cuts);
  return out;
}

double choose2(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace

double cut_weight(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  return flows(g, x, y).xy;
}

double ci(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  const Flows f = flows(g, x, y);
  if (f.xy + f.yx == 0.0) throw DataError("ci: no edges cross the cut");
  return f.xy / (f.xy + f.yx);
}

double tf(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  const Flows f = flows(g, x, y);
  return std::abs(f.xy - f.yx);
}

double ci_vol(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  const Flows f = flows(g, x, y);
  return imbalance_score(f, std::min(volume(g, x), volume(g, y)));
}

double ci_sz(const Digraph& g, std::span<const Vertex> x, std::span<const Vertex> y) {
  const Flows f = flows(g, x, y);
  return imbalance_score(f, static_cast<double>(std::min(x.size(), y.size())));
}

Eigen::MatrixXd cluster_flow_matrix(const Digraph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) throw std::invalid_argument("partition size does not match the graph");
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p.k, p.k);
  for (const Edge& e : g.edges()) {
    const int a = p.assignment[static_cast<std::size_t>(e.u)];
    const int b = p.assignment[static_cast<std::size_t>(e.v)];
    if (a != b) f(a, b) += e.w;
  }
  return f;
}

TopScore top_tf(const Digraph& g, const Partition& p, int c) {
  const Eigen::MatrixXd f = cluster_flow_matrix(g, p);
  std::vector<CutScore> cuts;
  for (int a = 0; a < p.k; ++a) {
    for (int b = a + 1; b < p.k; ++b) cuts.push_back({a, b, std::abs(f(a, b) - f(b, a))});
  }
  return rank(std::move(cuts), c);
}

TopScore top_ci(const Digraph& g, const Partition& p, int c, CiMode mode) {
  const Eigen::MatrixXd f = cluster_flow_matrix(g, p);
  std::vector<double> weight(static_cast<std::size_t>(p.k), 0.0);
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    const double add = mode == CiMode::vol ? g.out_degree(u) + g.in_degree(u) : 1.0;
    weight[static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(u)])] += add;
  }
  std::vector<CutScore> cuts;
  for (int a = 0; a < p.k; ++a) {
    for (int b = a + 1; b < p.k; ++b) {
      const double w = std::min(weight[static_cast<std::size_t>(a)], weight[static_cast<std::size_t>(b)]);
      cuts.push_back({a, b, imbalance_score({f(a, b), f(b, a)}, w)});
    }
  }
  return rank(std::move(cuts), c);
}

ExactTf exact_tf_k2(const Digraph& g) {
  const Vertex n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("exact_tf_k2: needs at least two vertices");
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  for (const Edge& e : g.edges()) {
    r[static_cast<std::size_t>(e.u)] += e.w;
    r[static_cast<std::size_t>(e.v)] -= e.w;
  }
  std::vector<char> in_x(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (r[static_cast<std::size_t>(u)] > 0.0) {
      in_x[static_cast<std::size_t>(u)] = 1;
      ++count;
    }
  }
  if (count == 0 || count == n) {
    // Row sums add to zero, so this only happens when all vanish.
    const char from = count == 0 ? 0 : 1;
    Vertex pick = -1;
    for (Vertex u = 0; u < n; ++u) {
      if (in_x[static_cast<std::size_t>(u)] != from) continue;
      if (pick < 0 || std::abs(r[static_cast<std::size_t>(u)]) < std::abs(r[static_cast<std::size_t>(pick)])) pick = u;
    }
    in_x[static_cast<std::size_t>(pick)] = static_cast<char>(1 - from);
  }
  ExactTf out;
  double sum = 0.0;
  for (Vertex u = 0; u < n; ++u) {
    if (in_x[static_cast<std::size_t>(u)]) {
      out.x.push_back(u);
      sum += r[static_cast<std::size_t>(u)];
    }
  }
  out.value = std::abs(sum);
  return out;
}

double ari(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("ari: partitions differ in length");
  if (a.size() < 2) throw std::invalid_argument("ari: needs at least two elements");
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> ra;
  std::map<int, long long> rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ra[a[i]];
    ++rb[b[i]];
  }
  double index = 0.0;
  for (const auto& [key, m] : joint) index += choose2(static_cast<double>(m));
  double sa = 0.0;
  double sb = 0.0;
  for (const auto& [key, m] : ra) sa += choose2(static_cast<double>(m));
  for (const auto& [key, m] : rb) sb += choose2(static_cast<double>(m));
  // Scaled by C(n, 2) so integer counts stay exact.
  const double pairs = choose2(static_cast<double>(a.size()));
  const double num = index * pairs - sa * sb;
  const double den = 0.5 * (sa + sb) * pairs - sa * sb;
  if (den == 0.0) return 1.0;
  return num / den;
}

double ari(const Partition& a, const Partition& b) { return ari(a.assignment, b.assignment); }

}  // namespace skewclust
