#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "skewclust/linalg.hpp"

namespace skewclust {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Reflector H = I - tau v v^T, v = (1, ess), with H x = beta e_1.
struct Householder {
  double tau = 0.0;
  double beta = 0.0;
  Eigen::VectorXd ess;
};

Householder make_householder(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Householder h;
  const double c0 = x[0];
  const auto tail = x.tail(x.size() - 1);
  const double tail_sq = tail.squaredNorm();
  if (tail_sq <= std::numeric_limits<double>::min()) {
    h.beta = c0;
    h.ess = Eigen::VectorXd::Zero(x.size() - 1);
    return h;
  }
  h.beta = std::sqrt(c0 * c0 + tail_sq);
  if (c0 >= 0.0) h.beta = -h.beta;
  h.ess = tail / (c0 - h.beta);
  h.tau = (h.beta - c0) / h.beta;
  return h;
}

void apply_left(const Householder& h, Eigen::Ref<Eigen::MatrixXd> x) {
  if (h.tau == 0.0) return;
  const Eigen::Index m = h.ess.size();
  Eigen::RowVectorXd w = x.row(0) + h.ess.transpose() * x.bottomRows(m);
  x.row(0) -= h.tau * w;
  x.bottomRows(m).noalias() -= h.tau * h.ess * w;
}

void apply_right(const Householder& h, Eigen::Ref<Eigen::MatrixXd> x) {
  if (h.tau == 0.0) return;
  const Eigen::Index m = h.ess.size();
  Eigen::VectorXd w = x.col(0) + x.rightCols(m) * h.ess;
  x.col(0) -= h.tau * w;
  x.rightCols(m).noalias() -= h.tau * w * h.ess.transpose();
}

class Francis {
 public:
  Francis(Eigen::MatrixXd& t, Eigen::MatrixXd& q) : t_(t), q_(q), n_(t.rows()) {}

  void run(int max_iter_per_row) {
    if (n_ == 0) return;
    double norm = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index i = 0; i <= std::min(j + 1, n_ - 1); ++i) norm += std::abs(t_(i, j));
    }
    if (norm == 0.0) return;
    const double zero = std::max(norm * kEps * kEps, std::numeric_limits<double>::min());
    const long long max_iter = static_cast<long long>(max_iter_per_row) * n_;

    Eigen::Index iu = n_ - 1;
    int iter = 0;
    long long total = 0;
    double exshift = 0.0;
    while (iu >= 0) {
      const Eigen::Index il = small_subdiag(iu, zero);
      if (il == iu) {
        t_(iu, iu) += exshift;
        if (iu > 0) t_(iu, iu - 1) = 0.0;
        --iu;
        iter = 0;
      } else if (il == iu - 1) {
        split_two_rows(iu, exshift);
        iu -= 2;
        iter = 0;
      } else {
        Eigen::Vector3d shift = compute_shift(iu, iter, exshift);
        ++iter;
        if (++total > max_iter) {
          throw NumericalError("real_schur_dense: no convergence after " + std::to_string(max_iter) +
                               " iterations");
        }
        Eigen::Index im = 0;
        const Eigen::Vector3d first = init_step(il, iu, shift, im);
        qr_step(il, im, iu, first);
      }
    }
  }

 private:
  Eigen::Index small_subdiag(Eigen::Index iu, double zero) const {
    Eigen::Index res = iu;
    while (res > 0) {
      const double s = std::max(std::abs(t_(res - 1, res - 1)) + std::abs(t_(res, res)), zero);
      if (std::abs(t_(res, res - 1)) <= kEps * s) break;
      --res;
    }
    return res;
  }

  // Deflates rows iu-1, iu; a block with real eigenvalues is triangularized
  // by a plane rotation.
  void split_two_rows(Eigen::Index iu, double exshift) {
    const double p = 0.5 * (t_(iu - 1, iu - 1) - t_(iu, iu));
    const double disc = p * p + t_(iu, iu - 1) * t_(iu - 1, iu);
    t_(iu, iu) += exshift;
    t_(iu - 1, iu - 1) += exshift;
    if (disc >= 0.0) {
      const double z = std::sqrt(std::abs(disc));
      const double x = p >= 0.0 ? p + z : p - z;
      const double y = t_(iu, iu - 1);
      const double r = std::hypot(x, y);
      if (r > 0.0) {
        const double c = x / r;
        const double s = y / r;
        for (Eigen::Index j = iu - 1; j < n_; ++j) {
          const double a = t_(iu - 1, j);
          const double b = t_(iu, j);
          t_(iu - 1, j) = c * a + s * b;
          t_(iu, j) = -s * a + c * b;
        }
        for (Eigen::Index i = 0; i <= iu; ++i) {
          const double a = t_(i, iu - 1);
          const double b = t_(i, iu);
          t_(i, iu - 1) = c * a + s * b;
          t_(i, iu) = -s * a + c * b;
        }
        for (Eigen::Index i = 0; i < n_; ++i) {
          const double a = q_(i, iu - 1);
          const double b = q_(i, iu);
          q_(i, iu - 1) = c * a + s * b;
          q_(i, iu) = -s * a + c * b;
        }
        t_(iu, iu - 1) = 0.0;
      }
    }
    if (iu > 1) t_(iu - 1, iu - 2) = 0.0;
  }

  Eigen::Vector3d compute_shift(Eigen::Index iu, int iter, double& exshift) {
    Eigen::Vector3d shift(t_(iu, iu), t_(iu - 1, iu - 1), t_(iu, iu - 1) * t_(iu - 1, iu));
    if (iter == 10) {
      exshift += shift[0];
      for (Eigen::Index i = 0; i <= iu; ++i) t_(i, i) -= shift[0];
      const double s = std::abs(t_(iu, iu - 1)) + std::abs(t_(iu - 1, iu - 2));
      shift << 0.75 * s, 0.75 * s, -0.4375 * s * s;
    }
    if (iter == 30) {
      double s = 0.5 * (shift[1] - shift[0]);
      s = s * s + shift[2];
      if (s > 0.0) {
        s = std::sqrt(s);
        if (shift[1] < shift[0]) s = -s;
        s += 0.5 * (shift[1] - shift[0]);
        s = shift[0] - shift[2] / s;
        exshift += s;
        for (Eigen::Index i = 0; i <= iu; ++i) t_(i, i) -= s;
        shift.setConstant(0.964);
      }
    }
    return shift;
  }

  Eigen::Vector3d init_step(Eigen::Index il, Eigen::Index iu, const Eigen::Vector3d& shift,
                            Eigen::Index& im) const {
    Eigen::Vector3d v;
    for (im = iu - 2; im >= il; --im) {
      const double tmm = t_(im, im);
      const double r = shift[0] - tmm;
      const double s = shift[1] - tmm;
      v[0] = (r * s - shift[2]) / t_(im + 1, im) + t_(im, im + 1);
      v[1] = t_(im + 1, im + 1) - tmm - r - s;
      v[2] = t_(im + 2, im + 1);
      if (im == il) break;
      const double lhs = t_(im, im - 1) * (std::abs(v[1]) + std::abs(v[2]));
      const double rhs =
          v[0] * (std::abs(t_(im - 1, im - 1)) + std::abs(tmm) + std::abs(t_(im + 1, im + 1)));
      if (std::abs(lhs) < kEps * rhs) break;
    }
    return v;
  }

  void qr_step(Eigen::Index il, Eigen::Index im, Eigen::Index iu, const Eigen::Vector3d& first) {
    for (Eigen::Index k = im; k <= iu - 2; ++k) {
      const bool first_iter = k == im;
      const Eigen::Vector3d v = first_iter ? first : Eigen::Vector3d(t_.block<3, 1>(k, k - 1));
      const Householder h = make_householder(v);
      if (h.beta == 0.0) continue;
      if (first_iter && k > il) {
        t_(k, k - 1) = -t_(k, k - 1);
      } else if (!first_iter) {
        t_(k, k - 1) = h.beta;
      }
      apply_left(h, t_.block(k, k, 3, n_ - k));
      apply_right(h, t_.block(0, k, std::min(iu, k + 3) + 1, 3));
      apply_right(h, q_.block(0, k, n_, 3));
    }
    const Householder h = make_householder(Eigen::Vector2d(t_.block<2, 1>(iu - 1, iu - 2)));
    if (h.beta != 0.0) {
      t_(iu - 1, iu - 2) = h.beta;
      apply_left(h, t_.block(iu - 1, iu - 1, 2, n_ - iu + 1));
      apply_right(h, t_.block(0, iu - 1, iu + 1, 2));
      apply_right(h, q_.block(0, iu - 1, n_, 2));
    }
    for (Eigen::Index i = im + 2; i <= iu; ++i) {
      t_(i, i - 2) = 0.0;
      if (i > im + 2) t_(i, i - 3) = 0.0;
    }
  }

  Eigen::MatrixXd& t_;
  Eigen::MatrixXd& q_;
  Eigen::Index n_;
};

// Eigenvalues of [[a, b], [c, d]]; the one with nonnegative imaginary part
// (or the larger real one).
std::complex<double> block_eigenvalue(double a, double b, double c, double d) {
  const double mid = 0.5 * (a + d);
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc >= 0.0) return {mid + std::sqrt(disc), 0.0};
  return {mid, std::sqrt(-disc)};
}

}  // namespace

RealSchur real_schur_dense(const Eigen::MatrixXd& a, int max_iter_per_row) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("real_schur_dense: matrix is not square");
  if (n > tolerance::dense_guard) {
    throw std::invalid_argument("real_schur_dense: n = " + std::to_string(n) + " exceeds the dense guard");
  }
  if (!a.allFinite()) throw std::invalid_argument("real_schur_dense: non-finite entries");

  RealSchur r{Eigen::MatrixXd::Identity(n, n), a};
  Eigen::MatrixXd& t = r.t;
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Householder h = make_householder(t.col(k).tail(n - k - 1));
    t(k + 1, k) = h.beta;
    t.col(k).tail(n - k - 2).setZero();
    apply_left(h, t.block(k + 1, k + 1, n - k - 1, n - k - 1));
    apply_right(h, t.block(0, k + 1, n, n - k - 1));
    apply_right(h, r.q.block(0, k + 1, n, n - k - 1));
  }
  Francis(t, r.q).run(max_iter_per_row);
  return r;
}

std::vector<SchurBlock> schur_blocks(const Eigen::MatrixXd& t) {
  std::vector<SchurBlock> out;
  const auto n = static_cast<int>(t.rows());
  for (int i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      out.push_back({i, 2, block_eigenvalue(t(i, i), t(i, i + 1), t(i + 1, i), t(i + 1, i + 1))});
      i += 2;
    } else {
      out.push_back({i, 1, {t(i, i), 0.0}});
      ++i;
    }
  }
  return out;
}

Eigen::VectorXcd schur_eigenvector(const RealSchur& schur, const SchurBlock& block) {
  using cd = std::complex<double>;
  const Eigen::MatrixXd& t = schur.t;
  const Eigen::Index n = t.rows();
  const cd lambda = block.eigenvalue;
  const double small = std::max(t.cwiseAbs().maxCoeff(), 1.0) * kEps;

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  const int s = block.start;
  if (block.size == 1) {
    y[s] = 1.0;
  } else {
    y[s] = t(s, s + 1);
    y[s + 1] = lambda - t(s, s);
  }

  // Back substitution through the blocks above.
  const std::vector<SchurBlock> blocks = schur_blocks(t);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    if (it->start >= s) continue;
    const int j = it->start;
    const Eigen::Index hi = s + block.size;
    if (it->size == 1) {
      cd rhs = 0.0;
      for (Eigen::Index m = j + 1; m < hi; ++m) rhs -= t(j, m) * y[m];
      cd diag = t(j, j) - lambda;
      if (std::abs(diag) < small) diag = small;
      y[j] = rhs / diag;
    } else {
      cd r0 = 0.0;
      cd r1 = 0.0;
      for (Eigen::Index m = j + 2; m < hi; ++m) {
        r0 -= t(j, m) * y[m];
        r1 -= t(j + 1, m) * y[m];
      }
      const cd a = t(j, j) - lambda;
      const cd b = t(j, j + 1);
      const cd c = t(j + 1, j);
      const cd d = t(j + 1, j + 1) - lambda;
      cd det = a * d - b * c;
      if (std::abs(det) < small * small) det = small * small;
      y[j] = (d * r0 - b * r1) / det;
      y[j + 1] = (a * r1 - c * r0) / det;
    }
  }

  Eigen::VectorXcd x = schur.q.cast<cd>() * y;
  x /= x.norm();
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
  }
  x *= std::conj(x[arg]) / std::abs(x[arg]);
  x[arg] = std::abs(x[arg]);
  return x;
}

}  // namespace skewclust
