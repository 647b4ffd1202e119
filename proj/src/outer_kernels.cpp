#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "proxdescent/outer.hpp"
#include "proxdescent/svd.hpp"

namespace proxdescent {

Vector shrink(const Vector& y, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("shrink: alpha must be nonnegative");
  Vector z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y(i);
    if (std::abs(yi) <= alpha) {
      z(i) = 0.0;
    } else if (yi > alpha) {
      z(i) = yi - alpha;
    } else {
      z(i) = yi + alpha;
    }
  }
  return z;
}

Vector group_shrink(const Vector& y, const std::vector<std::vector<int>>& groups, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("group_shrink: alpha must be nonnegative");
  Vector z = Vector::Zero(y.size());
  for (const auto& g : groups) {
    double norm_sq = 0.0;
    for (int i : g) norm_sq += y(i) * y(i);
    const double norm = std::sqrt(norm_sq);
    if (norm <= alpha) continue;
    const double scale = 1.0 - alpha / norm;
    for (int i : g) z(i) = scale * y(i);
  }
  return z;
}

double huber_phi(double z, double threshold) {
  const double a = std::abs(z);
  return a <= threshold ? 0.5 * z * z : threshold * a - 0.5 * threshold * threshold;
}

Vector huber_prox(const Vector& y, double threshold, double w) {
  if (!(threshold > 0.0) || !(w > 0.0)) throw std::invalid_argument("huber_prox: T and w must be positive");
  Vector z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double quad = w * y(i) / (1.0 + w);
    z(i) = std::abs(quad) <= threshold ? quad : y(i) - std::copysign(threshold / w, y(i));
  }
  return z;
}

Matrix nuclear_prox(const Matrix& y, double w, double reg_weight) {
  if (!(w > 0.0)) throw std::invalid_argument("nuclear_prox: w must be positive");
  if (reg_weight == 0.0) return y;
  const SvdResult svd = jacobi_svd(y);
  const Vector shrunk = (svd.s.array() - reg_weight / w).max(0.0).matrix();
  return svd.u * shrunk.asDiagonal() * svd.v.transpose();
}

namespace {

// Local-minimum test for a continuous scalar function from its one-sided
// slopes and curvature. Flat sides are accepted when the curvature there is
// nonnegative.
bool is_local_min(double left_slope, double right_slope, double left_curv, double right_curv, double tol) {
  const bool left_ok = left_slope < -tol || (std::abs(left_slope) <= tol && left_curv >= 0.0);
  const bool right_ok = right_slope > tol || (std::abs(right_slope) <= tol && right_curv >= 0.0);
  return left_ok && right_ok;
}

struct Candidate {
  double z;
  double value;
  bool local;
};

ScalarProx select(std::vector<Candidate> cands, double y, ProxPolicy policy, const char* who) {
  if (policy == ProxPolicy::NearestLocal) {
    std::erase_if(cands, [](const Candidate& c) { return !c.local; });
  }
  if (cands.empty()) throw SolverError(std::string(who) + ": no prox candidate found");
  ScalarProx out;
  if (policy == ProxPolicy::NearestLocal) {
    const auto best = std::min_element(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
      return std::abs(a.z - y) < std::abs(b.z - y);
    });
    out.z = best->z;
    return out;
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return std::abs(a.z) < std::abs(b.z);
  });
  out.z = cands.front().z;
  const double tie_tol = 1e-12 * (1.0 + std::abs(cands.front().value));
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (std::abs(cands[i].z - out.z) > 1e-9 && cands[i].value - cands.front().value <= tie_tol) out.tie = true;
  }
  return out;
}

// Bisection for the root of an increasing function on [lo, hi] with
// f(lo) < 0 < f(hi).
template <class F>
double bisect_increasing(F&& f, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ScalarProx mangasarian_prox(double y, double alpha, double w, ProxPolicy policy) {
  if (!(alpha > 0.0) || !(w > 0.0)) throw std::invalid_argument("mangasarian_prox: alpha and w must be positive");
  if (y == 0.0) return {};
  const double t = std::abs(y);
  const double sgn = y > 0.0 ? 1.0 : -1.0;
  auto objective = [&](double z) { return 1.0 - std::exp(-alpha * z) + 0.5 * w * (z - t) * (z - t); };
  // Stationarity on z > 0. No stationary point exists on z < 0 when y > 0.
  auto stationarity = [&](double z) { return w * (z - t) + alpha * std::exp(-alpha * z); };

  std::vector<Candidate> cands;
  // Kink: right slope alpha - w t, left slope -alpha - w t.
  cands.push_back({0.0, objective(0.0), alpha - w * t >= 0.0});

  // g = stationarity is convex with minimum at log(alpha^2/w)/alpha; the
  // local minimizer is the root on its increasing side.
  double lo = 0.0;
  if (alpha * alpha > w) lo = std::min(t, std::log(alpha * alpha / w) / alpha);
  if (stationarity(lo) < 0.0) {
    const double root = bisect_increasing(stationarity, lo, t);
    cands.push_back({root, objective(root), true});
  }
  ScalarProx out = select(std::move(cands), t, policy, "mangasarian_prox");
  out.z *= sgn;
  return out;
}

double zhang_phi(double z, double lambda, double a) {
  const double t = std::abs(z);
  if (t <= lambda) return lambda * t;
  if (t <= a * lambda) return -(t * t - 2.0 * a * lambda * t + lambda * lambda) / (2.0 * (a - 1.0));
  return (a + 1.0) * lambda * lambda / 2.0;
}

namespace {

// One-sided derivative of zhang_phi on z >= 0.
double zhang_slope(double t, double lambda, double a, bool right) {
  if (t < lambda || (t == lambda && !right)) return lambda;
  if (t < a * lambda || (t == a * lambda && !right)) return (a * lambda - t) / (a - 1.0);
  return 0.0;
}

double zhang_curv(double t, double lambda, double a, bool right) {
  if (t < lambda || (t == lambda && !right)) return 0.0;
  if (t < a * lambda || (t == a * lambda && !right)) return -1.0 / (a - 1.0);
  return 0.0;
}

}  // namespace

ScalarProx zhang_prox(double y, double lambda, double a, double w, ProxPolicy policy) {
  if (!(lambda > 0.0) || !(a > 1.0) || !(w > 0.0))
    throw std::invalid_argument("zhang_prox: need lambda > 0, a > 1, w > 0");
  if (y == 0.0) return {};
  const double t = std::abs(y);
  const double sgn = y > 0.0 ? 1.0 : -1.0;
  const double knee = a * lambda;
  auto objective = [&](double z) { return zhang_phi(z, lambda, a) + 0.5 * w * (z - t) * (z - t); };

  std::vector<double> points = {0.0, lambda, knee};
  points.push_back(std::clamp(t - lambda / w, 0.0, lambda));
  const double curv_mid = w - 1.0 / (a - 1.0);
  if (curv_mid > 0.0) {
    points.push_back(std::clamp((w * t - knee / (a - 1.0)) / curv_mid, lambda, knee));
  }
  points.push_back(std::max(t, knee));
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Negative z is dominated when y > 0 and has no local minimizers.
  std::vector<Candidate> cands;
  const double slope_tol = 1e-12 * (1.0 + w * t);
  for (double z : points) {
    const double left = z == 0.0 ? -lambda - w * t : zhang_slope(z, lambda, a, false) + w * (z - t);
    const double right = zhang_slope(z, lambda, a, true) + w * (z - t);
    const double left_curv = (z == 0.0 ? 0.0 : zhang_curv(z, lambda, a, false)) + w;
    const double right_curv = zhang_curv(z, lambda, a, true) + w;
    cands.push_back({z, objective(z), is_local_min(left, right, left_curv, right_curv, slope_tol)});
  }
  ScalarProx out = select(std::move(cands), t, policy, "zhang_prox");
  out.z *= sgn;
  return out;
}

ManifoldSignature polyhedral_signature(const Vector& z, const Matrix& slopes, const Vector& offsets, double tol) {
  if (slopes.rows() != z.size()) throw DimensionError("polyhedral_signature: dimension mismatch");
  const Vector vals = slopes.transpose() * z + offsets;
  const double top = vals.maxCoeff();
  ManifoldSignature sig{SignatureKind::ActiveIndexSet, {}};
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) >= top - tol) sig.data.push_back(static_cast<int>(i));
  return sig;
}

}  // namespace proxdescent
