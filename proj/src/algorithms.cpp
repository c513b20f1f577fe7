#include "skewclust/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "skewclust/random.hpp"

namespace skewclust {

namespace {

using Clock = std::chrono::steady_clock;

struct Phases {
  double setup_ms = 0.0;
  double embed_ms = 0.0;
};

template <class F>
auto timed(double& acc, F&& f) {
  const auto start = Clock::now();
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    acc += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  } else {
    auto result = f();
    acc += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return result;
  }
}

std::vector<std::complex<double>> as_spectrum(const Eigen::VectorXd& x) {
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.emplace_back(x[i], 0.0);
  return out;
}

void check_even_l(int l) {
  if (l < 2 || l % 2 != 0) throw std::invalid_argument("l = " + std::to_string(l) + " must be even and at least 2");
}

// l leading left singular triplets plus one more to test the gap at l.
TruncatedSVD leading_triplets(const SkewMatrix& k, int l, std::uint64_t seed, Flags& flags) {
  const int n = k.dimension();
  if (l > n) throw std::invalid_argument("l = " + std::to_string(l) + " exceeds the dimension " + std::to_string(n));
  SvdOptions opts;
  opts.seed = seed;
  opts.allow_rank_deficient = true;
  TruncatedSVD svd = truncated_svd(k.matrix(), std::min(l + 1, n), opts);
  const double s1 = svd.sigma[0];
  if (svd.sigma[l - 1] <= opts.tol * s1) {
    throw NumericalError("l = " + std::to_string(l) + " exceeds the numerical rank of K");
  }
  if (svd.size() > l && svd.sigma[l - 1] - svd.sigma[l] <= tolerance::pair * s1) flags.gap_degenerate = true;
  return svd;
}

TruncatedSVD head(const TruncatedSVD& svd, int l) {
  TruncatedSVD out = svd;
  out.sigma = svd.sigma.head(l);
  out.u = svd.u.leftCols(l);
  out.v = svd.v.leftCols(l);
  out.residuals = svd.residuals.head(l);
  return out;
}

SparseMatrix dd_sym_matrix(const Digraph& g, double alpha) {
  const SparseMatrix& m = g.adjacency();
  const SparseMatrix& mt = g.adjacency_transpose();
  SparseMatrix a = alpha * SparseMatrix(m * mt) + (1.0 - alpha) * SparseMatrix(mt * m);
  // Products may round differently in mirrored positions; averaging with the
  // transpose makes A exactly symmetric.
  SparseMatrix at = a.transpose();
  return 0.5 * (a + at);
}

SpectralEmbedding dd_sym_impl(const Digraph& g, int k, double alpha, bool normalized, std::uint64_t seed, Phases& ph) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha = " + std::to_string(alpha) + " outside [0, 1]");
  const Eigen::Index n = g.num_vertices();
  Eigen::VectorXd scale;
  SparseMatrix a = timed(ph.setup_ms, [&] {
    SparseMatrix a = dd_sym_matrix(g, alpha);
    if (normalized) {
      const Eigen::VectorXd d = a * Eigen::VectorXd::Ones(n);
      scale.resize(n);
      for (Eigen::Index u = 0; u < n; ++u) {
        if (d[u] <= 0.0) throw ZeroDegreeError(static_cast<Vertex>(u));
        scale[u] = 1.0 / std::sqrt(d[u]);
      }
      for (Eigen::Index u = 0; u < a.outerSize(); ++u) {
        for (SparseMatrix::InnerIterator it(a, u); it; ++it) it.valueRef() *= scale[u] * scale[it.col()];
      }
    }
    return a;
  });
  return timed(ph.embed_ms, [&] {
    EigOptions opts;
    opts.seed = seed;
    const SymmetricEigs eig = symmetric_eigs(a, k, opts);
    SpectralEmbedding out;
    Eigen::MatrixXd x = eig.vectors;
    if (normalized) {
      // Eigenvectors of D^-1 A are D^-1/2 y.
      x = scale.asDiagonal() * x;
      for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j).normalize();
    }
    out.coords = x;
    out.spectrum = as_spectrum(eig.values);
    return out;
  });
}

SpectralEmbedding svd_m_impl(const Digraph& g, int d, std::uint64_t seed, Phases& ph) {
  const int n = g.num_vertices();
  if (d < 1 || d >= n) throw std::invalid_argument("d = " + std::to_string(d) + " outside 1.." + std::to_string(n - 1));
  SvdOptions opts;
  opts.seed = seed;
  opts.allow_rank_deficient = true;
  const TruncatedSVD svd = timed(ph.embed_ms, [&] { return truncated_svd(g.adjacency(), d, opts); });
  return timed(ph.setup_ms, [&] {
    const Eigen::VectorXd root = svd.sigma.cwiseSqrt();
    SpectralEmbedding out;
    out.coords.resize(n, 2 * d);
    out.coords.leftCols(d) = svd.u * root.asDiagonal();
    out.coords.rightCols(d) = svd.v * root.asDiagonal();
    out.spectrum = as_spectrum(svd.sigma);
    return out;
  });
}

SpectralEmbedding bcs_impl(const Digraph& g, int k, std::optional<double> tau, Phases& ph) {
  if (k < 2) throw std::invalid_argument("bcs: k must be at least 2");
  const int n = g.num_vertices();
  if (n > tolerance::dense_guard) {
    throw std::invalid_argument("bcs: n = " + std::to_string(n) + " exceeds the dense guard");
  }
  if (tau && !(*tau >= 0.0 && *tau <= 1.0)) throw std::invalid_argument("bcs: tau outside [0, 1]");
  const int l = k / 2;
  SpectralEmbedding out;

  const Eigen::MatrixXd p = timed(ph.setup_ms, [&] {
    const double t = tau ? *tau : (strongly_connected(g) ? 0.0 : 0.01);
    Eigen::MatrixXd p = Eigen::MatrixXd(g.adjacency());
    for (int u = 0; u < n; ++u) {
      const double d = g.out_degree(u);
      if (d > 0.0) {
        p.row(u) /= d;
      } else {
        p.row(u).setConstant(1.0 / n);
        out.flags.regularized = true;
      }
    }
    if (t > 0.0) {
      p = (1.0 - t) * p + Eigen::MatrixXd::Constant(n, n, t / n);
      out.flags.regularized = true;
    }
    return p;
  });

  timed(ph.embed_ms, [&] {
    const RealSchur schur = real_schur_dense(p);
    std::vector<SchurBlock> candidates;
    for (const SchurBlock& b : schur_blocks(schur.t)) {
      if (b.eigenvalue.real() < 1.0 - 1e-10 && b.eigenvalue.imag() >= 0.0) candidates.push_back(b);
    }
    std::ranges::stable_sort(candidates, [](const SchurBlock& a, const SchurBlock& b) {
      return std::abs(a.eigenvalue) > std::abs(b.eigenvalue);
    });
    if (static_cast<int>(candidates.size()) < l) {
      throw NumericalError("bcs: " + std::to_string(candidates.size()) + " qualifying eigenvalues, need " +
                           std::to_string(l));
    }
    out.coords.resize(n, 2 * l);
    for (int j = 0; j < l; ++j) {
      const Eigen::VectorXcd x = schur_eigenvector(schur, candidates[static_cast<std::size_t>(j)]);
      out.coords.col(j) = x.real();
      out.coords.col(l + j) = x.imag();
      out.spectrum.push_back(candidates[static_cast<std::size_t>(j)].eigenvalue);
    }
  });
  return out;
}

struct Prepared {
  const Digraph* original = nullptr;
  std::optional<Digraph> restricted;
  std::optional<SkewMatrix> k;  // of *graph, unnormalized
  std::vector<Vertex> vertices;
  bool restricted_flag = false;

  const Digraph& graph() const { return restricted ? *restricted : *original; }
};

Prepared prepare(const Digraph& g, bool restrict) {
  Prepared p;
  p.original = &g;
  SkewMatrix k0 = build_skew(g);
  const Connectivity conn = weak_connectivity(k0);
  if (restrict && !conn.connected) {
    p.vertices = conn.components.front();
    p.restricted.emplace(induced_subgraph(g, p.vertices));
    p.restricted_flag = true;
  } else {
    p.vertices.resize(static_cast<std::size_t>(g.num_vertices()));
    std::iota(p.vertices.begin(), p.vertices.end(), 0);
    p.k.emplace(std::move(k0));
  }
  if (p.graph().num_edges() == 0) throw DataError("graph has no edges");
  return p;
}

SkewMatrix skew_of(const Prepared& p, Normalization norm) {
  SkewMatrix k = p.k ? *p.k : build_skew(p.graph());
  return norm == Normalization::none ? k : normalize_skew(k, norm);
}

int skew_l(int k) { return k % 2 == 0 ? k : k - 1; }

}  // namespace

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::skew_f: return "skew_f";
    case Method::skew_r: return "skew_r";
    case Method::skew_s: return "skew_s";
    case Method::herm: return "herm";
    case Method::herm_dense: return "herm_dense";
    case Method::dd_sym: return "dd_sym";
    case Method::svd_m: return "svd_m";
    case Method::bcs: return "bcs";
  }
  return "?";
}

std::vector<Method> all_methods() {
  return {Method::skew_f, Method::skew_r, Method::skew_s, Method::herm,
          Method::herm_dense, Method::dd_sym, Method::svd_m, Method::bcs};
}

std::string Flags::str() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(gap_degenerate, "gap_degenerate");
  add(regularized, "regularized");
  add(restricted_to_giant_component, "restricted_to_giant_component");
  add(non_normal, "non_normal");
  return out;
}

std::vector<int> TimedPartition::full_assignment(Vertex n) const {
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out[static_cast<std::size_t>(vertices[i])] = partition.assignment[i];
  }
  return out;
}

SpectralEmbedding skew_embedding(const SkewMatrix& k, int l, std::uint64_t seed) {
  check_even_l(l);
  SpectralEmbedding out;
  const TruncatedSVD svd = leading_triplets(k, l, seed, out.flags);
  out.coords = svd.u.leftCols(l);
  out.spectrum = as_spectrum(svd.sigma);
  return out;
}

SpectralEmbedding herm_embedding(const SkewMatrix& k, int l, std::uint64_t seed) {
  if (k.normalization() == Normalization::rw) {
    SpectralEmbedding out = skew_embedding(k, l, seed);
    out.flags.non_normal = true;
    return out;
  }
  check_even_l(l);
  SpectralEmbedding out;
  const TruncatedSVD svd = leading_triplets(k, l, seed, out.flags);
  const SchurPairs pairs = schur_pairs_from_svd(head(svd, l), k);
  if (pairs.dimension() < l) throw NumericalError("herm: fewer than l Schur vectors");
  out.coords = pairs.basis();
  out.spectrum = as_spectrum(svd.sigma);
  return out;
}

SpectralEmbedding herm_dense_embedding(const SkewMatrix& k, int l, std::uint64_t seed) {
  const int n = k.dimension();
  if (n > tolerance::dense_guard) {
    throw std::invalid_argument("herm_dense: n = " + std::to_string(n) + " exceeds the dense guard");
  }
  SpectralEmbedding out = herm_embedding(k, l, seed);
  const Eigen::MatrixXd q = out.coords;
  out.coords = q * q.transpose();
  return out;
}

SpectralEmbedding dd_sym_embedding(const Digraph& g, int k, double alpha, bool normalized, std::uint64_t seed) {
  Phases ph;
  return dd_sym_impl(g, k, alpha, normalized, seed, ph);
}

SpectralEmbedding svd_m_embedding(const Digraph& g, int d, std::uint64_t seed) {
  Phases ph;
  return svd_m_impl(g, d, seed, ph);
}

SpectralEmbedding bcs_embedding(const Digraph& g, int k, std::optional<double> tau) {
  Phases ph;
  return bcs_impl(g, k, tau, ph);
}

int select_gap_cut(const Eigen::VectorXd& sigma, bool& degenerate, double tol) {
  const auto m = static_cast<int>(sigma.size());
  int best = 2;
  double best_gap = -1.0;
  for (int j = 2; j <= m - 1; j += 2) {
    const double gap = sigma[j - 1] - sigma[j];
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  const double s1 = m > 0 ? sigma[0] : 0.0;
  degenerate = best_gap <= tol * s1;
  return best;
}

Relaxation trade_flow_relaxation(const Digraph& g) {
  const SkewMatrix k = build_skew(g);
  if (k.matrix().nonZeros() == 0) throw DataError("trade_flow_relaxation: K is zero");
  SvdOptions opts;
  opts.allow_rank_deficient = true;
  const TruncatedSVD svd = truncated_svd(k.matrix(), std::min(2, k.dimension()), opts);
  return {svd.sigma[0], svd.u.col(0), svd.v.col(0)};
}

TimedPartition cluster(const Digraph& g, const ClusterSpec& spec) {
  const int min_k = (spec.method == Method::dd_sym || spec.method == Method::svd_m) ? 1 : 2;
  if (spec.k < min_k) throw std::invalid_argument("k = " + std::to_string(spec.k) + " below " + std::to_string(min_k));

  TimedPartition out;
  Phases ph;
  const Prepared prep = timed(ph.setup_ms, [&] { return prepare(g, spec.restrict_to_giant_component); });
  const Digraph& h = prep.graph();
  const std::uint64_t svd_seed = spec.seed;

  SpectralEmbedding emb;
  switch (spec.method) {
    case Method::skew_f:
    case Method::skew_r:
    case Method::herm:
    case Method::herm_dense: {
      int l = skew_l(spec.k);
      if (spec.method == Method::skew_r) {
        if (!spec.l_override) throw std::invalid_argument("skew_r needs l");
        l = *spec.l_override;
      }
      check_even_l(l);
      const SkewMatrix k = timed(ph.setup_ms, [&] { return skew_of(prep, spec.normalization); });
      emb = timed(ph.embed_ms, [&] {
        switch (spec.method) {
          case Method::herm: return herm_embedding(k, l, svd_seed);
          case Method::herm_dense: return herm_dense_embedding(k, l, svd_seed);
          default: return skew_embedding(k, l, svd_seed);
        }
      });
      break;
    }
    case Method::skew_s: {
      const SkewMatrix k = timed(ph.setup_ms, [&] { return skew_of(prep, spec.normalization); });
      emb = timed(ph.embed_ms, [&] {
        const int n = k.dimension();
        const int cap = spec.search_cap > 0 ? spec.search_cap : 2 * spec.k + 2;
        int m = std::min(cap, n - 2);
        if (m < 2) m = std::min(2, n);
        SvdOptions opts;
        opts.seed = svd_seed;
        opts.allow_rank_deficient = true;
        const TruncatedSVD svd = truncated_svd(k.matrix(), m, opts);
        SpectralEmbedding e;
        const int l = select_gap_cut(svd.sigma, e.flags.gap_degenerate);
        if (l > svd.size() || svd.sigma[l - 1] <= opts.tol * svd.sigma[0]) {
          throw NumericalError("skew_s: selected l = " + std::to_string(l) + " exceeds the numerical rank of K");
        }
        e.coords = svd.u.leftCols(l);
        e.spectrum = as_spectrum(svd.sigma);
        return e;
      });
      break;
    }
    case Method::dd_sym:
      emb = dd_sym_impl(h, spec.k, spec.alpha, spec.normalization != Normalization::none, svd_seed, ph);
      break;
    case Method::svd_m:
      emb = svd_m_impl(h, spec.d.value_or(spec.k), svd_seed, ph);
      break;
    case Method::bcs:
      emb = bcs_impl(h, spec.k, spec.tau, ph);
      break;
  }

  KMeansOptions km;
  km.restarts = spec.kmeans_restarts;
  km.seed = derive_seed(spec.seed, 0x6b6d65616e73ULL);
  KMeansResult result;
  out.kmeans_ms = 0.0;
  timed(out.kmeans_ms, [&] { result = kmeans(emb.coords, spec.k, km); });

  out.partition = std::move(result.partition);
  out.inertia = result.inertia;
  out.vertices = prep.vertices;
  out.setup_ms = ph.setup_ms;
  out.embed_ms = ph.embed_ms;
  out.embed_dim = static_cast<int>(emb.coords.cols());
  out.flags = emb.flags;
  out.flags.restricted_to_giant_component = prep.restricted_flag;
  out.spectrum = std::move(emb.spectrum);
  return out;
}

namespace {

ClusterSpec make_spec(Method method, int k, std::uint64_t seed, Normalization norm = Normalization::none) {
  ClusterSpec spec;
  spec.method = method;
  spec.k = k;
  spec.seed = seed;
  spec.normalization = norm;
  return spec;
}

}  // namespace

TimedPartition skew_f(const Digraph& g, int k, Normalization norm, std::uint64_t seed) {
  return cluster(g, make_spec(Method::skew_f, k, seed, norm));
}

TimedPartition skew_r(const Digraph& g, int k, int l, Normalization norm, std::uint64_t seed) {
  ClusterSpec spec = make_spec(Method::skew_r, k, seed, norm);
  spec.l_override = l;
  return cluster(g, spec);
}

TimedPartition skew_s(const Digraph& g, int k, Normalization norm, std::uint64_t seed, int search_cap) {
  ClusterSpec spec = make_spec(Method::skew_s, k, seed, norm);
  spec.search_cap = search_cap;
  return cluster(g, spec);
}

TimedPartition herm(const Digraph& g, int k, Normalization norm, std::uint64_t seed) {
  return cluster(g, make_spec(Method::herm, k, seed, norm));
}

TimedPartition herm_dense(const Digraph& g, int k, Normalization norm, std::uint64_t seed) {
  return cluster(g, make_spec(Method::herm_dense, k, seed, norm));
}

TimedPartition dd_sym(const Digraph& g, int k, double alpha, bool normalized, std::uint64_t seed) {
  ClusterSpec spec = make_spec(Method::dd_sym, k, seed, normalized ? Normalization::sym : Normalization::none);
  spec.alpha = alpha;
  return cluster(g, spec);
}

TimedPartition svd_m(const Digraph& g, int k, int d, std::uint64_t seed) {
  ClusterSpec spec = make_spec(Method::svd_m, k, seed);
  spec.d = d;
  return cluster(g, spec);
}

TimedPartition bcs(const Digraph& g, int k, std::uint64_t seed, std::optional<double> tau) {
  ClusterSpec spec = make_spec(Method::bcs, k, seed);
  spec.tau = tau;
  return cluster(g, spec);
}

}  // namespace skewclust
