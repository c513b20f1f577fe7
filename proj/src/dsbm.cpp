#include "skewclust/dsbm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "skewclust/random.hpp"

namespace skewclust {

namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 0.5)) throw std::invalid_argument("mu = " + std::to_string(mu) + " outside [0, 0.5)");
}

void check_k(int k, int min_k) {
  if (k < min_k) throw std::invalid_argument("k = " + std::to_string(k) + " below " + std::to_string(min_k));
}

void orient(Eigen::MatrixXd& f, int a, int b, double mu) {
  f(a, b) = 1.0 - mu;
  f(b, a) = mu;
}

}  // namespace

MetaPattern parse_meta_pattern(std::string_view name) {
  if (name == "circulant") return MetaPattern::circulant;
  if (name == "dag") return MetaPattern::dag;
  if (name == "cmg") return MetaPattern::cmg;
  throw std::invalid_argument("unknown meta pattern '" + std::string(name) + "'");
}

std::string_view to_string(MetaPattern pattern) {
  switch (pattern) {
    case MetaPattern::circulant: return "circulant";
    case MetaPattern::dag: return "dag";
    case MetaPattern::cmg: return "cmg";
  }
  return "?";
}

Eigen::MatrixXd meta_circulant(int k, double mu) {
  check_k(k, 2);
  check_mu(mu);
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(k, k, 0.5);
  // For k = 2 the cycle has a single edge 0 -> 1.
  const int edges = k == 2 ? 1 : k;
  for (int a = 0; a < edges; ++a) orient(f, a, (a + 1) % k, mu);
  return f;
}

Eigen::MatrixXd meta_dag(int k, double mu) {
  check_k(k, 3);
  check_mu(mu);
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(k, k, 0.5);
  for (int a = 0; a < k; ++a) {
    for (int step : {1, 2}) {
      if (a + step < k) orient(f, a + step, a, mu);
    }
  }
  return f;
}

Eigen::MatrixXd meta_cmg(int k, double mu, std::uint64_t seed) {
  check_k(k, 2);
  check_mu(mu);
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(k, k, 0.5);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const bool forward = keyed_uniform(seed, {0x4d4554414dULL, static_cast<std::uint64_t>(a),
                                                static_cast<std::uint64_t>(b)}) < 0.5;
      if (forward) {
        orient(f, a, b, mu);
      } else {
        orient(f, b, a, mu);
      }
    }
  }
  return f;
}

Eigen::MatrixXd meta_matrix(MetaPattern pattern, int k, double mu, std::uint64_t seed) {
  switch (pattern) {
    case MetaPattern::circulant: return meta_circulant(k, mu);
    case MetaPattern::dag: return meta_dag(k, mu);
    case MetaPattern::cmg: return meta_cmg(k, mu, seed);
  }
  throw std::invalid_argument("unknown meta pattern");
}

std::vector<int> equal_sizes(int n, int k) {
  if (k < 1 || n < k) throw std::invalid_argument("cannot split " + std::to_string(n) + " vertices into " + std::to_string(k) + " clusters");
  std::vector<int> sizes(static_cast<std::size_t>(k), n / k);
  for (int i = 0; i < n % k; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

void validate(const DsbmParams& params) {
  const int k = params.k;
  if (k < 1) throw std::invalid_argument("dsbm: k must be positive");
  if (!(params.p >= 0.0 && params.p <= 1.0) || !(params.q >= 0.0 && params.q <= 1.0)) {
    throw std::invalid_argument("dsbm: p and q must lie in [0, 1]");
  }
  if (static_cast<int>(params.sizes.size()) != k) throw std::invalid_argument("dsbm: need one size per cluster");
  for (int s : params.sizes) {
    if (s < 1) throw std::invalid_argument("dsbm: cluster sizes must be positive");
  }
  if (params.f.rows() != k || params.f.cols() != k) throw std::invalid_argument("dsbm: F must be k x k");
  for (int a = 0; a < k; ++a) {
    if (params.f(a, a) != 0.5) throw std::invalid_argument("dsbm: diagonal of F must be 1/2");
    for (int b = 0; b < k; ++b) {
      const double x = params.f(a, b);
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("dsbm: F entries must be probabilities");
      if (std::abs(x + params.f(b, a) - 1.0) > 1e-12) throw std::invalid_argument("dsbm: F(a,b) + F(b,a) must be 1");
    }
  }
}

DsbmInstance generate(const DsbmParams& params) {
  validate(params);
  const int n = std::accumulate(params.sizes.begin(), params.sizes.end(), 0);
  std::vector<int> cluster;
  cluster.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < params.k; ++a) cluster.insert(cluster.end(), static_cast<std::size_t>(params.sizes[static_cast<std::size_t>(a)]), a);

  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    const int a = cluster[static_cast<std::size_t>(u)];
    for (Vertex v = u + 1; v < n; ++v) {
      const int b = cluster[static_cast<std::size_t>(v)];
      const double prob = a == b ? params.p : params.q;
      const auto uu = static_cast<std::uint64_t>(u);
      const auto vv = static_cast<std::uint64_t>(v);
      if (keyed_uniform(params.seed, {uu, vv, 0}) >= prob) continue;
      if (keyed_uniform(params.seed, {uu, vv, 1}) < params.f(a, b)) {
        edges.push_back({u, v, 1.0});
      } else {
        edges.push_back({v, u, 1.0});
      }
    }
  }
  return {Digraph(n, std::move(edges)), Partition{std::move(cluster), params.k}, params};
}

}  // namespace skewclust
