#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "krylov.hpp"
#include "skewclust/linalg.hpp"

namespace skewclust {

namespace {

void check_rank(const TruncatedSVD& r, const SvdOptions& opts) {
  if (r.sigma.size() == 0) return;
  if (r.sigma[0] == 0.0) throw NumericalError("matrix is zero; no singular triplets");
  if (opts.allow_rank_deficient) return;
  const double last = r.sigma[r.sigma.size() - 1];
  if (last <= opts.tol * r.sigma[0]) {
    throw NumericalError("requested " + std::to_string(r.sigma.size()) +
                         " singular triplets but the matrix has numerical rank below that");
  }
}

void fill_residuals(const SparseMatrix& a, TruncatedSVD& r) {
  r.residuals.resize(r.sigma.size());
  for (Eigen::Index j = 0; j < r.sigma.size(); ++j) {
    const double left = (a * r.v.col(j) - r.sigma[j] * r.u.col(j)).norm();
    const double right = (a.transpose() * r.u.col(j) - r.sigma[j] * r.v.col(j)).norm();
    r.residuals[j] = std::max(left, right);
  }
}

}  // namespace

TruncatedSVD dense_truncated_svd(const Eigen::MatrixXd& a, int l) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSVD r;
  r.sigma = svd.singularValues().head(l);
  r.u = svd.matrixU().leftCols(l);
  r.v = svd.matrixV().leftCols(l);
  r.dense = true;
  return r;
}

TruncatedSVD truncated_svd(const SparseMatrix& a, int l, const SvdOptions& opts) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Eigen::Index min_dim = std::min(rows, cols);
  if (l < 1 || l > min_dim) {
    throw std::invalid_argument("truncated_svd: l = " + std::to_string(l) + " outside 1.." +
                                std::to_string(min_dim));
  }
  if (a.nonZeros() == 0) throw NumericalError("truncated_svd: matrix has no nonzero entries");

  const Eigen::Index b = std::max(1, opts.block_size);
  // Working basis width: enough room to keep l Ritz vectors plus a few
  // blocks of fresh Krylov directions across restarts.
  Eigen::Index width = std::max<Eigen::Index>(2 * l + 2 * b, l + 16);
  width = std::min(width, min_dim - b);
  width -= width % b;

  if (min_dim <= opts.dense_cutoff || width < l + b) {
    TruncatedSVD r = dense_truncated_svd(Eigen::MatrixXd(a), l);
    fill_residuals(a, r);
    check_rank(r, opts);
    return r;
  }

  const SparseMatrix at = a.transpose();
  detail::StartVectors rng(opts.seed);

  Eigen::MatrixXd p(cols, width + b);  // right Krylov basis plus next block
  Eigen::MatrixXd q(rows, width);      // left Krylov basis
  Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(width, width);  // q^T A p
  Eigen::MatrixXd r_last(b, b);

  {
    Eigen::MatrixXd start(cols, b);
    for (Eigen::Index j = 0; j < b; ++j) start.col(j) = rng.draw(cols);
    detail::orthonormalize_block(p, 0, start, rng);
    p.leftCols(b) = start;
  }

  Eigen::Index kept = 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> small;
  Eigen::VectorXd ritz_residual(width);
  int restart = 0;
  for (;; ++restart) {
    for (Eigen::Index j = kept; j < width; j += b) {
      Eigen::MatrixXd w = a * p.middleCols(j, b);
      const Eigen::MatrixXd c = detail::orthonormalize_block(q, j, w, rng);
      q.middleCols(j, b) = w;
      bmat.block(0, j, j + b, b) = c;

      Eigen::MatrixXd z = at * q.middleCols(j, b);
      const Eigen::MatrixXd d = detail::orthonormalize_block(p, j + b, z, rng);
      p.middleCols(j + b, b) = z;
      r_last = d.bottomRows(b);
    }

    small.compute(bmat, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = small.singularValues();
    const Eigen::MatrixXd& ub = small.matrixU();
    const Eigen::MatrixXd& vb = small.matrixV();
    if (s[0] == 0.0) throw NumericalError("truncated_svd: matrix is numerically zero");

    // A^T (q ub_i) = s_i (p vb_i) + p_next * r_last * ub(last block, i)
    const Eigen::MatrixXd tail = r_last * ub.bottomRows(b);
    bool converged = true;
    for (Eigen::Index i = 0; i < width; ++i) ritz_residual[i] = tail.col(i).norm();
    for (Eigen::Index i = 0; i < l; ++i) {
      if (ritz_residual[i] > 0.5 * opts.tol * s[0]) converged = false;
    }

    if (converged) {
      TruncatedSVD r;
      r.sigma = s.head(l);
      r.u = q * ub.leftCols(l);
      r.v = p.leftCols(width) * vb.leftCols(l);
      r.restarts = restart;
      fill_residuals(a, r);
      check_rank(r, opts);
      return r;
    }
    if (restart >= opts.max_restarts) {
      std::ostringstream msg;
      msg << "truncated_svd: no convergence after " << restart << " restarts; residuals";
      for (Eigen::Index i = 0; i < l; ++i) msg << ' ' << ritz_residual[i] / s[0];
      throw NumericalError(msg.str());
    }

    // Thick restart: keep the leading Ritz vectors and the pending block.
    Eigen::Index keep = std::min<Eigen::Index>(width - b, l + (width - l) / 2);
    keep = width - b * ((width - keep + b - 1) / b);
    keep = std::max<Eigen::Index>(keep, 0);
    const Eigen::MatrixXd next = p.middleCols(width, b);
    const Eigen::MatrixXd p_keep = p.leftCols(width) * vb.leftCols(keep);
    const Eigen::MatrixXd q_keep = q * ub.leftCols(keep);
    p.leftCols(keep) = p_keep;
    p.middleCols(keep, b) = next;
    q.leftCols(keep) = q_keep;
    bmat.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) bmat(i, i) = s[i];
    kept = keep;
  }
}

}  // namespace skewclust
