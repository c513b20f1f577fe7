#include <cmath>

#include "doctest.h"
#include "skewclust/dsbm.hpp"
#include "skewclust/metrics.hpp"
#include "support.hpp"

using namespace skewclust;

namespace {

DsbmParams params(int k, std::vector<int> sizes, double p, double q, Eigen::MatrixXd f, std::uint64_t seed) {
  DsbmParams out;
  out.k = k;
  out.sizes = std::move(sizes);
  out.p = p;
  out.q = q;
  out.f = std::move(f);
  out.seed = seed;
  return out;
}

}  // namespace

TEST_CASE("meta_circulant") {
  Eigen::MatrixXd expect(3, 3);
  expect << 0.5, 1.0, 0.0, 0.0, 0.5, 1.0, 1.0, 0.0, 0.5;
  CHECK(meta_circulant(3, 0.0) == expect);
  const Eigen::MatrixXd f = meta_circulant(5, 0.3);
  CHECK(f(0, 1) == 0.7);
  CHECK(f(1, 0) == doctest::Approx(0.3));
  CHECK(f(0, 2) == 0.5);
  CHECK(f(4, 0) == 0.7);
  CHECK_THROWS_AS(meta_circulant(5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(meta_circulant(5, -0.1), std::invalid_argument);
  const Eigen::MatrixXd two = meta_circulant(2, 0.1);
  CHECK(two(0, 1) == 0.9);
  CHECK(two(1, 0) == doctest::Approx(0.1));
}

TEST_CASE("meta_dag") {
  const Eigen::MatrixXd f = meta_dag(5, 0.1);
  CHECK(f(1, 2) == 0.1);
  CHECK(f(2, 1) == 0.9);
  CHECK(f(0, 3) == 0.5);
  CHECK(f(0, 2) == 0.1);
  CHECK(f(2, 0) == 0.9);
  CHECK(f(4, 0) == 0.5);
  CHECK((f + f.transpose() - Eigen::MatrixXd::Ones(5, 5)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(meta_dag(2, 0.1), std::invalid_argument);
}

TEST_CASE("meta_cmg") {
  const Eigen::MatrixXd f = meta_cmg(6, 0.2, 42);
  for (int a = 0; a < 6; ++a) {
    CHECK(f(a, a) == 0.5);
    for (int b = 0; b < 6; ++b) {
      if (a != b) CHECK((f(a, b) == 0.2 || f(a, b) == 0.8));
    }
  }
  CHECK(meta_cmg(6, 0.2, 42) == f);
  // Different seeds give different orientations somewhere among 15 pairs.
  bool differs = false;
  for (std::uint64_t s = 0; s < 5 && !differs; ++s) differs = meta_cmg(6, 0.2, s) != f;
  CHECK(differs);
}

TEST_CASE("generate at extreme parameters") {
  const DsbmInstance inst = generate(params(2, {2, 2}, 1.0, 1.0, meta_circulant(2, 0.0), 1));
  CHECK(inst.graph.num_edges() == 6);
  CHECK(tf(inst.graph, std::vector<Vertex>{0, 1}, std::vector<Vertex>{2, 3}) == 4.0);
  CHECK(cut_weight(inst.graph, std::vector<Vertex>{2, 3}, std::vector<Vertex>{0, 1}) == 0.0);
  CHECK(inst.truth.assignment == std::vector<int>{0, 0, 1, 1});

  CHECK(generate(params(3, {4, 4, 4}, 0.0, 0.0, meta_circulant(3, 0.0), 1)).graph.num_edges() == 0);
}

TEST_CASE("generate validates parameters") {
  CHECK_THROWS_AS(generate(params(2, {2, 2}, 1.5, 1.0, meta_circulant(2, 0.0), 1)), std::invalid_argument);
  CHECK_THROWS_AS(generate(params(2, {2}, 0.5, 0.5, meta_circulant(2, 0.0), 1)), std::invalid_argument);
  Eigen::MatrixXd bad = meta_circulant(3, 0.0);
  bad(0, 1) = 0.6;
  CHECK_THROWS_AS(generate(params(3, {2, 2, 2}, 0.5, 0.5, bad, 1)), std::invalid_argument);
}

TEST_CASE("generate is deterministic and produces no reciprocal pairs") {
  const auto pr = params(4, equal_sizes(200, 4), 0.1, 0.05, meta_cmg(4, 0.1, 3), 17);
  const DsbmInstance a = generate(pr);
  const DsbmInstance b = generate(pr);
  CHECK(std::equal(a.graph.edges().begin(), a.graph.edges().end(), b.graph.edges().begin(), b.graph.edges().end()));
  for (const Edge& e : a.graph.edges()) CHECK(a.graph.weight(e.v, e.u) == 0.0);
  CHECK(a.truth.cluster_sizes() == std::vector<int>{50, 50, 50, 50});
}

TEST_CASE("equal_sizes") {
  CHECK(equal_sizes(10, 3) == std::vector<int>{4, 3, 3});
  CHECK(equal_sizes(500, 5) == std::vector<int>(5, 100));
  CHECK_THROWS_AS(equal_sizes(2, 3), std::invalid_argument);
}

TEST_CASE("edge count at full scale is within three standard deviations") {
  const auto pr = params(5, equal_sizes(5000, 5), 0.008, 0.008, meta_circulant(5, 0.0), 9);
  const double pairs = 5000.0 * 4999.0 / 2.0;
  const double mean = 0.008 * pairs;
  const double sd = std::sqrt(pairs * 0.008 * 0.992);
  const auto m = static_cast<double>(generate(pr).graph.num_edges());
  CHECK(std::abs(m - mean) <= 3.0 * sd);
  CHECK(mean == doctest::Approx(99980.0));
}

TEST_CASE("orientation marginals follow F") {
  // Two clusters of 150: 22500 cross pairs at q = 0.5 give about 11000 edges.
  const double mu = 0.3;
  const auto pr = params(2, {150, 150}, 0.5, 0.5, meta_circulant(2, mu), 5);
  const DsbmInstance inst = generate(pr);
  double forward = 0.0;
  double cross = 0.0;
  double within_up = 0.0;
  double within = 0.0;
  for (const Edge& e : inst.graph.edges()) {
    const int a = inst.truth.assignment[static_cast<std::size_t>(e.u)];
    const int b = inst.truth.assignment[static_cast<std::size_t>(e.v)];
    if (a != b) {
      cross += 1.0;
      forward += a == 0 ? 1.0 : 0.0;
    } else {
      within += 1.0;
      within_up += e.u < e.v ? 1.0 : 0.0;
    }
  }
  REQUIRE(cross >= 10000.0);
  const double frac = forward / cross;
  CHECK(std::abs(frac - (1.0 - mu)) <= 4.0 * std::sqrt(mu * (1.0 - mu) / cross));
  CHECK(std::abs(within_up / within - 0.5) <= 4.0 * std::sqrt(0.25 / within));
}

TEST_CASE("mu = 0 circulant orients every adjacent cross edge forward") {
  const auto pr = params(5, equal_sizes(300, 5), 0.05, 0.05, meta_circulant(5, 0.0), 2);
  const DsbmInstance inst = generate(pr);
  for (const Edge& e : inst.graph.edges()) {
    const int a = inst.truth.assignment[static_cast<std::size_t>(e.u)];
    const int b = inst.truth.assignment[static_cast<std::size_t>(e.v)];
    CHECK(b != (a + 4) % 5);  // never against the cycle
  }
}

TEST_CASE("p = q gives degree distributions that do not depend on the cluster") {
  const auto pr = params(2, {400, 400}, 0.05, 0.05, meta_circulant(2, 0.0), 8);
  const DsbmInstance inst = generate(pr);
  double deg[2] = {0.0, 0.0};
  for (Vertex u = 0; u < 800; ++u) {
    deg[inst.truth.assignment[static_cast<std::size_t>(u)]] += inst.graph.out_degree(u) + inst.graph.in_degree(u);
  }
  // Total degree per vertex is Binomial(799, 0.05): mean 39.95, sd about 6.2.
  const double sd_mean = std::sqrt(799.0 * 0.05 * 0.95 / 400.0);
  CHECK(std::abs(deg[0] / 400.0 - deg[1] / 400.0) <= 4.0 * std::sqrt(2.0) * sd_mean);
}
