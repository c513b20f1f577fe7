#include "skewclust/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "skewclust/random.hpp"

namespace skewclust {

std::vector<int> Partition::cluster_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int c : assignment) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

std::vector<std::vector<Vertex>> Partition::clusters() const {
  std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(k));
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    out[static_cast<std::size_t>(assignment[u])].push_back(static_cast<Vertex>(u));
  }
  return out;
}

Partition canonicalize(Partition p) {
  std::vector<int> relabel;
  int next = 0;
  for (int& c : p.assignment) {
    if (c < 0) throw std::invalid_argument("negative cluster label");
    if (static_cast<std::size_t>(c) >= relabel.size()) relabel.resize(static_cast<std::size_t>(c) + 1, -1);
    int& r = relabel[static_cast<std::size_t>(c)];
    if (r < 0) r = next++;
    c = r;
  }
  p.k = next;
  return p;
}

Partition make_partition(std::vector<int> labels) { return canonicalize(Partition{std::move(labels), 0}); }

namespace {

using Centroids = Embedding;

double sq_dist(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

Centroids seed_plus_plus(const Embedding& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Centroids c(k, d);
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::Index pick = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
  for (int j = 0; j < k; ++j) {
    if (j > 0) {
      double total = 0.0;
      for (double v : dist) total += v;
      if (total > 0.0) {
        const double target = unif(rng) * total;
        double acc = 0.0;
        pick = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += dist[static_cast<std::size_t>(i)];
          if (dist[static_cast<std::size_t>(i)] > 0.0 && acc >= target) {
            pick = i;
            break;
          }
        }
        if (pick < 0) {
          for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (dist[static_cast<std::size_t>(i)] > 0.0) {
              pick = i;
              break;
            }
          }
        }
      } else {
        // All remaining points coincide with a centroid.
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!chosen[static_cast<std::size_t>(i)]) free.push_back(i);
        }
        pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      }
    }
    chosen[static_cast<std::size_t>(pick)] = 1;
    c.row(j) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& di = dist[static_cast<std::size_t>(i)];
      di = std::min(di, sq_dist(x.row(i).data(), c.row(j).data(), d));
    }
  }
  return c;
}

struct Run {
  std::vector<int> label;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

// Nearest centroid per point, ties to the lower index. Returns the inertia.
double assign(const Embedding& x, const Centroids& c, std::vector<int>& label, std::vector<double>& dist) {
  const Eigen::Index d = x.cols();
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      const double s = sq_dist(x.row(i).data(), c.row(j).data(), d);
      if (s < best) {
        best = s;
        arg = static_cast<int>(j);
      }
    }
    label[static_cast<std::size_t>(i)] = arg;
    dist[static_cast<std::size_t>(i)] = best;
    inertia += best;
  }
  return inertia;
}

// Moves the farthest point of the highest-inertia cluster into each empty one.
void repair_empty(const Embedding& x, Centroids& c, std::vector<int>& label, std::vector<double>& dist) {
  const int k = static_cast<int>(c.rows());
  for (;;) {
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    std::vector<double> cost(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < label.size(); ++i) {
      ++count[static_cast<std::size_t>(label[i])];
      cost[static_cast<std::size_t>(label[i])] += dist[i];
    }
    const auto empty = std::ranges::find(count, 0);
    if (empty == count.end()) return;
    int worst = -1;
    for (int j = 0; j < k; ++j) {
      if (count[static_cast<std::size_t>(j)] < 2) continue;
      if (worst < 0 || cost[static_cast<std::size_t>(j)] > cost[static_cast<std::size_t>(worst)]) worst = j;
    }
    std::size_t far = 0;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < label.size(); ++i) {
      if (label[i] == worst && dist[i] > far_dist) {
        far = i;
        far_dist = dist[i];
      }
    }
    const auto target = static_cast<int>(empty - count.begin());
    label[far] = target;
    dist[far] = 0.0;
    c.row(target) = x.row(static_cast<Eigen::Index>(far));
  }
}

Run lloyd(const Embedding& x, int k, const KMeansOptions& opts, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Centroids c = seed_plus_plus(x, k, rng);
  Run run;
  run.label.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
  Centroids next(k, d);
  std::vector<int> count(static_cast<std::size_t>(k));

  for (run.iterations = 1;; ++run.iterations) {
    assign(x, c, run.label, dist);
    repair_empty(x, c, run.label, dist);

    next.setZero();
    std::ranges::fill(count, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = run.label[static_cast<std::size_t>(i)];
      next.row(j) += x.row(i);
      ++count[static_cast<std::size_t>(j)];
    }
    double shift = 0.0;
    double inertia = 0.0;
    for (int j = 0; j < k; ++j) next.row(j) /= static_cast<double>(count[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      inertia += sq_dist(x.row(i).data(), next.row(run.label[static_cast<std::size_t>(i)]).data(), d);
    }
    for (int j = 0; j < k; ++j) shift = std::max(shift, (next.row(j) - c.row(j)).norm());
    run.trace.push_back(inertia);
    c = next;
    run.inertia = inertia;
    if (shift < opts.tol || run.iterations >= opts.max_iter) break;
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Embedding& points, int k, const KMeansOptions& opts) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be positive");
  if (k > n) {
    throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " points");
  }
  if (!points.allFinite()) throw std::invalid_argument("kmeans: non-finite coordinates");
  if (opts.restarts < 1 || opts.max_iter < 1) throw std::invalid_argument("kmeans: restarts and max_iter must be positive");

  Run best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    Run run = lloyd(points, k, opts, rng);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  KMeansResult out;
  out.partition = make_partition(std::move(best.label));
  out.inertia = best.inertia;
  out.iterations = best.iterations;
  out.restarts_used = opts.restarts;
  out.trace = std::move(best.trace);
  return out;
}

double partition_inertia(const Embedding& points, const Partition& p) {
  if (static_cast<Eigen::Index>(p.assignment.size()) != points.rows()) {
    throw std::invalid_argument("partition_inertia: size mismatch");
  }
  Centroids c = Centroids::Zero(p.k, points.cols());
  std::vector<int> count(static_cast<std::size_t>(p.k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    c.row(p.assignment[static_cast<std::size_t>(i)]) += points.row(i);
    ++count[static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(i)])];
  }
  for (int j = 0; j < p.k; ++j) {
    if (count[static_cast<std::size_t>(j)] > 0) c.row(j) /= static_cast<double>(count[static_cast<std::size_t>(j)]);
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    s += (points.row(i) - c.row(p.assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return s;
}

}  // namespace skewclust
