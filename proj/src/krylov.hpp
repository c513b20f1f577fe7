#pragma once

// Block Gram-Schmidt shared by the Lanczos kernels.

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace skewclust::detail {

class StartVectors {
 public:
  explicit StartVectors(std::uint64_t seed) : rng_(seed) {}

  Eigen::VectorXd draw(Eigen::Index n) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = normal_(rng_);
    return x;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// Orthonormalizes the columns of `w` against basis.leftCols(used) and
/// against each other, two classical Gram-Schmidt passes per column.
///
/// Returns C with (used + w.cols()) rows such that the original block equals
/// [basis.leftCols(used), w_out] * C. A column that vanishes after projection
/// is replaced by a fresh random direction and gets a zero diagonal entry.
inline Eigen::MatrixXd orthonormalize_block(const Eigen::MatrixXd& basis, Eigen::Index used,
                                            Eigen::MatrixXd& w, StartVectors& rng) {
  const Eigen::Index b = w.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(used + b, b);
  const auto prior = basis.leftCols(used);

  auto project = [&](Eigen::VectorXd& x, Eigen::Index j, Eigen::VectorXd* coeff) {
    for (int pass = 0; pass < 2; ++pass) {
      if (used > 0) {
        const Eigen::VectorXd h = prior.transpose() * x;
        x.noalias() -= prior * h;
        if (coeff) coeff->head(used) += h;
      }
      for (Eigen::Index i = 0; i < j; ++i) {
        const double h = w.col(i).dot(x);
        x -= h * w.col(i);
        if (coeff) (*coeff)[used + i] += h;
      }
    }
  };

  for (Eigen::Index j = 0; j < b; ++j) {
    Eigen::VectorXd x = w.col(j);
    const double norm0 = x.norm();
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(used + b);
    project(x, j, &coeff);
    double nrm = x.norm();
    if (norm0 == 0.0 || nrm <= 1e-12 * norm0) {
      // Invariant subspace reached; continue with an arbitrary new direction.
      coeff[used + j] = 0.0;
      for (int attempt = 0; attempt < 4; ++attempt) {
        x = rng.draw(w.rows());
        project(x, j, nullptr);
        nrm = x.norm();
        if (nrm > 1e-8) break;
      }
      x /= nrm;
    } else {
      coeff[used + j] = nrm;
      x /= nrm;
    }
    w.col(j) = x;
    c.col(j) = coeff;
  }
  return c;
}

}  // namespace skewclust::detail
