#include <cmath>
#include <stdexcept>
#include <string>

#include "skewclust/linalg.hpp"

namespace skewclust {

int SchurPairs::dimension() const noexcept { return 2 * static_cast<int>(pairs.size()); }

Eigen::MatrixXd SchurPairs::basis() const {
  if (pairs.empty()) return {};
  const Eigen::Index n = pairs.front().q_odd.size();
  Eigen::MatrixXd out(n, dimension());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    out.col(2 * j) = pairs[j].q_odd;
    out.col(2 * j + 1) = pairs[j].q_even;
  }
  return out;
}

SchurPairs schur_pairs_from_svd(const TruncatedSVD& svd, const SkewMatrix& k, double pair_tol) {
  if (k.normalization() == Normalization::rw) {
    throw std::invalid_argument("schur_pairs_from_svd: rw-normalized matrix is not skew-symmetric");
  }
  const int l = svd.size();
  if (l % 2 != 0) throw std::invalid_argument("schur_pairs_from_svd: odd number of triplets");
  const SparseMatrix& a = k.matrix();
  const Eigen::Index n = a.rows();
  if (svd.u.rows() != n) throw std::invalid_argument("schur_pairs_from_svd: dimension mismatch");

  SchurPairs out;
  const double sigma1 = l > 0 ? svd.sigma[0] : 0.0;
  Eigen::MatrixXd done(n, l);
  Eigen::Index used = 0;

  auto orthogonalize = [&](Eigen::VectorXd x) {
    for (int pass = 0; pass < 2; ++pass) {
      if (used > 0) x -= done.leftCols(used) * (done.leftCols(used).transpose() * x);
    }
    return x;
  };

  for (int j = 0; j < l; j += 2) {
    if (std::abs(svd.sigma[j] - svd.sigma[j + 1]) > pair_tol * sigma1) {
      throw NumericalError("schur_pairs_from_svd: singular values " + std::to_string(j + 1) + " and " +
                           std::to_string(j + 2) + " are not paired");
    }
    if (svd.sigma[j + 1] <= pair_tol * sigma1) break;  // kernel
    Eigen::VectorXd q = orthogonalize(svd.u.col(j));
    if (q.norm() < 0.5) q = orthogonalize(svd.u.col(j + 1));
    q.normalize();
    Eigen::VectorXd kq = a * q;
    const double alpha = kq.norm();
    if (alpha == 0.0) throw NumericalError("schur_pairs_from_svd: vector lies in the kernel of K");
    Eigen::VectorXd q_even = -kq / alpha;
    done.col(used++) = q;
    done.col(used++) = q_even;
    out.pairs.push_back({alpha, std::move(q), std::move(q_even)});
  }
  out.kernel_dim = static_cast<int>(n) - out.dimension();
  return out;
}

std::vector<ComplexEigenpair> eigvecs_from_pairs(const SchurPairs& p) {
  std::vector<ComplexEigenpair> out;
  const double scale = 1.0 / std::sqrt(2.0);
  for (const SchurPair& pair : p.pairs) {
    if (pair.alpha <= 0.0) continue;
    out.push_back({pair.alpha, pair.q_odd * scale, pair.q_even * scale});
  }
  return out;
}

Embedding projector_embedding(const SchurPairs& p, int l, int dense_guard) {
  if (l < 2 || l % 2 != 0) throw std::invalid_argument("projector_embedding: l must be even and positive");
  if (l > p.dimension()) {
    throw std::invalid_argument("projector_embedding: l = " + std::to_string(l) + " exceeds " +
                                std::to_string(p.dimension()) + " Schur vectors");
  }
  const Eigen::MatrixXd q = p.basis().leftCols(l);
  if (q.rows() > dense_guard) {
    throw std::invalid_argument("projector_embedding: n = " + std::to_string(q.rows()) +
                                " exceeds the dense guard " + std::to_string(dense_guard));
  }
  Embedding out = q * q.transpose();
  return out;
}

}  // namespace skewclust
