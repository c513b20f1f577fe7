#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "skewclust/graph.hpp"

namespace skewclust {

/// Numerical tolerances shared by the spectral kernels.
namespace tolerance {
inline constexpr double svd = 1e-10;   // relative residual target
inline constexpr double orth = 1e-10;  // orthonormality of computed bases
inline constexpr double pair = 1e-6;   // equal-singular-value test, relative to sigma_1
inline constexpr int dense_cutoff = 64;
inline constexpr int dense_guard = 10000;
}  // namespace tolerance

/// Row u is the coordinate vector of vertex u.
using Embedding = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SvdOptions {
  int max_restarts = 1000;
  double tol = tolerance::svd;
  std::uint64_t seed = 0;
  /// Lanczos block width. Two covers the doubled singular values of
  /// skew-symmetric matrices.
  int block_size = 2;
  int dense_cutoff = tolerance::dense_cutoff;
  /// When false, asking for a singular value that is numerically zero is an
  /// error (the requested rank exceeds the matrix rank).
  bool allow_rank_deficient = false;
};

/// Leading singular triplets A v_j = sigma_j u_j.
struct TruncatedSVD {
  Eigen::VectorXd sigma;      // nonincreasing
  Eigen::MatrixXd u;          // rows x l
  Eigen::MatrixXd v;          // cols x l
  Eigen::VectorXd residuals;  // max(|A v - sigma u|, |A^T u - sigma v|)
  int restarts = 0;
  bool dense = false;

  int size() const noexcept { return static_cast<int>(sigma.size()); }
};

/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization and
/// thick restarts; dense SVD when min(rows, cols) <= opts.dense_cutoff.
TruncatedSVD truncated_svd(const SparseMatrix& a, int l, const SvdOptions& opts = {});

/// Reference dense SVD (leading l triplets) used by the fallback path.
TruncatedSVD dense_truncated_svd(const Eigen::MatrixXd& a, int l);

struct SchurPair {
  double alpha = 0.0;
  Eigen::VectorXd q_odd;
  Eigen::VectorXd q_even;
};

/// Leading 2x2 blocks of the real Schur form of a skew-symmetric K:
/// K [q_odd q_even] = [-alpha q_even, alpha q_odd].
struct SchurPairs {
  std::vector<SchurPair> pairs;  // alpha nonincreasing
  int kernel_dim = 0;            // n - 2 * pairs.size()

  int dimension() const noexcept;
  /// n x 2s matrix [q_odd_1 q_even_1 q_odd_2 q_even_2 ...].
  Eigen::MatrixXd basis() const;
};

/// Groups the triplets of `svd` (computed from `k`) into Schur pairs and
/// fixes each pair's basis through q_even = -K q_odd / alpha.
SchurPairs schur_pairs_from_svd(const TruncatedSVD& svd, const SkewMatrix& k,
                                double pair_tol = tolerance::pair);

/// Eigenpair (i alpha, real_part + i imag_part) of K.
struct ComplexEigenpair {
  double alpha = 0.0;
  Eigen::VectorXd real_part;
  Eigen::VectorXd imag_part;
};

std::vector<ComplexEigenpair> eigvecs_from_pairs(const SchurPairs& p);

/// Dense projector P = Q~ Q~^T onto the first l Schur vectors.
Embedding projector_embedding(const SchurPairs& p, int l, int dense_guard = tolerance::dense_guard);

struct EigOptions {
  int max_restarts = 1000;
  double tol = tolerance::svd;
  std::uint64_t seed = 0;
  int block_size = 2;
  int dense_cutoff = tolerance::dense_cutoff;
  double symmetry_tol = 1e-12;  // relative Frobenius asymmetry allowed
};

struct SymmetricEigs {
  Eigen::VectorXd values;   // algebraically nonincreasing
  Eigen::MatrixXd vectors;  // n x k, orthonormal
  Eigen::VectorXd residuals;
  int restarts = 0;
  bool dense = false;
};

/// k algebraically largest eigenpairs by block Lanczos with full
/// reorthogonalization and thick restarts.
SymmetricEigs symmetric_eigs(const SparseMatrix& a, int k, const EigOptions& opts = {});

struct RealSchur {
  Eigen::MatrixXd q;  // orthogonal
  Eigen::MatrixXd t;  // quasi upper triangular, 1x1 and 2x2 diagonal blocks
};

/// Householder Hessenberg reduction followed by Francis double-shift QR.
RealSchur real_schur_dense(const Eigen::MatrixXd& a, int max_iter_per_row = 40);

/// A diagonal block of T and its eigenvalue; for a 2x2 block the eigenvalue
/// with nonnegative imaginary part is reported (its conjugate is implied).
struct SchurBlock {
  int start = 0;
  int size = 1;
  std::complex<double> eigenvalue;
};

std::vector<SchurBlock> schur_blocks(const Eigen::MatrixXd& t);

/// Right eigenvector of Q T Q^T for the eigenvalue of `block`, unit norm,
/// phase fixed so the largest-modulus entry is real positive.
Eigen::VectorXcd schur_eigenvector(const RealSchur& schur, const SchurBlock& block);

}  // namespace skewclust
