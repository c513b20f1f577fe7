#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "krylov.hpp"
#include "skewclust/linalg.hpp"

namespace skewclust {

namespace {

// Eigen orders ascending; reverse to algebraically nonincreasing.
void take_largest(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors, int k,
                  Eigen::VectorXd& out_values, Eigen::MatrixXd& out_vectors) {
  const Eigen::Index n = values.size();
  out_values.resize(k);
  out_vectors.resize(vectors.rows(), k);
  for (int i = 0; i < k; ++i) {
    out_values[i] = values[n - 1 - i];
    out_vectors.col(i) = vectors.col(n - 1 - i);
  }
}

void fill_residuals(const SparseMatrix& a, SymmetricEigs& r) {
  r.residuals.resize(r.values.size());
  for (Eigen::Index j = 0; j < r.values.size(); ++j) {
    r.residuals[j] = (a * r.vectors.col(j) - r.values[j] * r.vectors.col(j)).norm();
  }
}

}  // namespace

SymmetricEigs symmetric_eigs(const SparseMatrix& a, int k, const EigOptions& opts) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("symmetric_eigs: matrix is not square");
  if (k < 1 || k >= n) {
    throw std::invalid_argument("symmetric_eigs: k = " + std::to_string(k) + " outside 1.." +
                                std::to_string(n - 1));
  }
  const SparseMatrix at = a.transpose();
  const double norm = a.norm();
  if ((SparseMatrix(a - at)).norm() > opts.symmetry_tol * norm) {
    throw std::invalid_argument("symmetric_eigs: matrix is not symmetric");
  }

  const Eigen::Index b = std::max(1, opts.block_size);
  Eigen::Index width = std::max<Eigen::Index>(2 * k + 2 * b, k + 16);
  width = std::min(width, n - b);
  width -= width % b;

  if (n <= opts.dense_cutoff || width < k + b) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(a)};
    SymmetricEigs r;
    take_largest(es.eigenvalues(), es.eigenvectors(), k, r.values, r.vectors);
    r.dense = true;
    fill_residuals(a, r);
    return r;
  }

  detail::StartVectors rng(opts.seed);
  Eigen::MatrixXd v(n, width + b);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(width, width);  // v^T A v
  Eigen::MatrixXd r_last(b, b);
  {
    Eigen::MatrixXd start(n, b);
    for (Eigen::Index j = 0; j < b; ++j) start.col(j) = rng.draw(n);
    detail::orthonormalize_block(v, 0, start, rng);
    v.leftCols(b) = start;
  }

  Eigen::Index kept = 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
  int restart = 0;
  for (;; ++restart) {
    for (Eigen::Index j = kept; j < width; j += b) {
      Eigen::MatrixXd w = a * v.middleCols(j, b);
      const Eigen::MatrixXd c = detail::orthonormalize_block(v, j + b, w, rng);
      v.middleCols(j + b, b) = w;
      h.block(0, j, j + b, b) = c.topRows(j + b);
      h.block(j, 0, b, j + b) = c.topRows(j + b).transpose();
      r_last = c.bottomRows(b);
    }

    small.compute(0.5 * (h + h.transpose()));
    Eigen::VectorXd theta;
    Eigen::MatrixXd y;
    take_largest(small.eigenvalues(), small.eigenvectors(), static_cast<int>(width), theta, y);
    const double scale = std::max(std::abs(theta[0]), std::abs(theta[width - 1]));
    if (scale == 0.0) throw NumericalError("symmetric_eigs: matrix is numerically zero");

    const Eigen::MatrixXd tail = r_last * y.bottomRows(b);
    bool converged = true;
    for (int i = 0; i < k; ++i) {
      if (tail.col(i).norm() > 0.5 * opts.tol * scale) converged = false;
    }
    if (converged) {
      SymmetricEigs r;
      r.values = theta.head(k);
      r.vectors = v.leftCols(width) * y.leftCols(k);
      r.restarts = restart;
      fill_residuals(a, r);
      return r;
    }
    if (restart >= opts.max_restarts) {
      std::ostringstream msg;
      msg << "symmetric_eigs: no convergence after " << restart << " restarts; residuals";
      for (int i = 0; i < k; ++i) msg << ' ' << tail.col(i).norm() / scale;
      throw NumericalError(msg.str());
    }

    Eigen::Index keep = std::min<Eigen::Index>(width - b, k + (width - k) / 2);
    keep = width - b * ((width - keep + b - 1) / b);
    const Eigen::MatrixXd next = v.middleCols(width, b);
    const Eigen::MatrixXd v_keep = v.leftCols(width) * y.leftCols(keep);
    v.leftCols(keep) = v_keep;
    v.middleCols(keep, b) = next;
    h.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) h(i, i) = theta[i];
    kept = keep;
  }
}

}  // namespace skewclust
