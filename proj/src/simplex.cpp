#include "proxdescent/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace proxdescent {

Vector project_simplex(const Vector& y) {
  const Eigen::Index k = y.size();
  if (k == 0) throw DimensionError("project_simplex: empty vector");
  std::vector<double> sorted(y.data(), y.data() + k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

namespace {

double objective(const Matrix& q_mat, const Vector& q_vec, const Vector& l) {
  return 0.5 * l.dot(q_mat * l) - q_vec.dot(l);
}

// Largest violation of the simplex KKT conditions: on the support the
// gradient must be constant and minimal.
double kkt_violation(const Vector& grad, const Vector& l) {
  double support_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < l.size(); ++i)
    if (l(i) > 0.0) support_max = std::max(support_max, grad(i));
  return std::max(0.0, support_max - grad.minCoeff());
}

// Solves the equality-constrained problem on the support of l. Returns
// nullopt when the face solution leaves the simplex.
std::optional<Vector> polish(const Matrix& q_mat, const Vector& q_vec, const Vector& l) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < l.size(); ++i)
    if (l(i) > 1e-12) support.push_back(i);
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s == 0) return std::nullopt;
  Matrix kkt = Matrix::Zero(s + 1, s + 1);
  Vector rhs(s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = q_mat(support[a], support[b]);
    kkt(a, s) = 1.0;
    kkt(s, a) = 1.0;
    rhs(a) = q_vec(support[a]);
  }
  rhs(s) = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  Vector out = Vector::Zero(l.size());
  for (Eigen::Index a = 0; a < s; ++a) {
    if (!(sol(a) >= 0.0)) return std::nullopt;
    out(support[a]) = sol(a);
  }
  const double total = out.sum();
  if (!(std::abs(total - 1.0) < 1e-9)) return std::nullopt;
  return out / total;
}

}  // namespace

SimplexQpResult simplex_qp(const Matrix& q_mat, const Vector& q_vec, int max_iters,
                           const std::function<bool(const Vector&)>& done) {
  const Eigen::Index k = q_vec.size();
  if (q_mat.rows() != k || q_mat.cols() != k) throw DimensionError("simplex_qp: Q must be k x k");

  SimplexQpResult res;
  res.lambda = Vector::Constant(k, 1.0 / static_cast<double>(k));
  if (k == 1) {
    res.converged = true;
    return res;
  }

  const double lipschitz =
      std::max(Eigen::SelfAdjointEigenSolver<Matrix>(q_mat, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff(),
               1e-300);
  const double scale = 1.0 + q_vec.cwiseAbs().maxCoeff() + lipschitz;
  const double kkt_tol = 1e-14 * scale;
  const double step = 1.0 / lipschitz;

  auto finished = [&](const Vector& l) {
    return kkt_violation(q_mat * l - q_vec, l) <= kkt_tol || (done && done(l));
  };
  if (finished(res.lambda)) {
    res.converged = true;
    return res;
  }

  Vector l = res.lambda;
  Vector extrap = l;
  double t = 1.0;
  double best = objective(q_mat, q_vec, l);
  for (int it = 1; it <= max_iters; ++it) {
    const Vector next = project_simplex(extrap - step * (q_mat * extrap - q_vec));
    const double next_val = objective(q_mat, q_vec, next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    res.iterations = it;
    if (next_val > best && t > 1.0) {
      // Function-value restart.
      extrap = l;
      t = 1.0;
      continue;
    }
    extrap = next + ((t - 1.0) / t_next) * (next - l);
    t = t_next;
    l = next;
    best = std::min(best, next_val);

    if (it % 20 == 0 || it == max_iters) {
      if (auto polished = polish(q_mat, q_vec, l)) {
        const double pv = objective(q_mat, q_vec, *polished);
        if (pv <= best + 1e-15 * scale) {
          l = *polished;
          extrap = l;
          t = 1.0;
          best = pv;
        }
      }
    }
    if (finished(l)) {
      // A gap certificate only fixes l to about the square root of the gap;
      // the face solve recovers it to rounding when the support is right.
      if (auto polished = polish(q_mat, q_vec, l)) {
        if (objective(q_mat, q_vec, *polished) <= best + 1e-15 * scale) l = *polished;
      }
      res.lambda = l;
      res.converged = true;
      return res;
    }
  }
  res.lambda = l;
  res.converged = finished(l);
  return res;
}

double distance_to_hull(const Matrix& points, const Vector& v) {
  if (points.rows() != v.size()) throw DimensionError("distance_to_hull: dimension mismatch");
  if (points.cols() == 0) return std::numeric_limits<double>::infinity();
  const Matrix gram = points.transpose() * points;
  const Vector lin = points.transpose() * v;
  const SimplexQpResult r = simplex_qp(gram, lin, 20000, nullptr);
  return (points * r.lambda - v).norm();
}

}  // namespace proxdescent
