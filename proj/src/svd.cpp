#include "proxdescent/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace proxdescent {

namespace {

// Orthogonalizes the columns of `work` in place, accumulating rotations in
// `rot`. Returns the number of sweeps used.
int orthogonalize_columns(Matrix& work, Matrix& rot, const JacobiOptions& opts) {
  const Eigen::Index n = work.cols();
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = work.col(i).squaredNorm();
        const double beta = work.col(j).squaredNorm();
        const double gamma = work.col(i).dot(work.col(j));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= opts.tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < work.rows(); ++r) {
          const double wi = work(r, i);
          const double wj = work(r, j);
          work(r, i) = c * wi - s * wj;
          work(r, j) = s * wi + c * wj;
        }
        for (Eigen::Index r = 0; r < rot.rows(); ++r) {
          const double vi = rot(r, i);
          const double vj = rot(r, j);
          rot(r, i) = c * vi - s * vj;
          rot(r, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) return sweep;
  }
  throw SolverError("jacobi_svd: no convergence after " + std::to_string(opts.max_sweeps) + " sweeps");
}

}  // namespace

SvdResult jacobi_svd(const Matrix& a, const JacobiOptions& opts) {
  // Work on the orientation with more rows than columns so that only
  // min(rows, cols) columns need orthogonalizing.
  const bool transposed = a.rows() < a.cols();
  Matrix work = transposed ? Matrix(a.transpose()) : a;
  const Eigen::Index k = work.cols();
  Matrix rot = Matrix::Identity(k, k);

  SvdResult out;
  out.sweeps = k > 1 ? orthogonalize_columns(work, rot, opts) : 0;

  Vector norms(k);
  for (Eigen::Index i = 0; i < k; ++i) norms(i) = work.col(i).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  Matrix left(work.rows(), k);
  Matrix right(k, k);
  out.s.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.s(c) = norms(src);
    left.col(c) = norms(src) > 0.0 ? Vector(work.col(src) / norms(src)) : Vector::Zero(work.rows());
    right.col(c) = rot.col(src);
  }
  if (transposed) {
    out.u = std::move(right);
    out.v = std::move(left);
  } else {
    out.u = std::move(left);
    out.v = std::move(right);
  }
  return out;
}

}  // namespace proxdescent
