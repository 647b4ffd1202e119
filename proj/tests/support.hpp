#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers or the oracle module.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace testsupport {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double shrink_formula(double y, double alpha) {
  if (y > alpha) return y - alpha;
  if (y < -alpha) return y + alpha;
  return 0.0;
}

// Minimizes f on [lo, hi] by a dense scan followed by golden-section
// refinement of the best bracket.
inline double argmin_1d(const std::function<double(double)>& f, double lo, double hi, int samples = 20001) {
  const double h = (hi - lo) / (samples - 1);
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double v = f(lo + i * h);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * h;
  double b = lo + std::min(samples - 1, best + 1) * h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  const double mid = 0.5 * (a + b);
  const double edge = lo + best * h;
  return f(mid) <= f(edge) ? mid : edge;
}

// Projection onto the unit simplex by bisection on the shift.
inline Vector simplex_projection_bisect(const Vector& y) {
  double lo = y.minCoeff() - 1.0;
  double hi = y.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = (y.array() - mid).max(0.0).sum();
    if (s > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (y.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

// Central-difference Jacobian with a fixed step.
inline Matrix central_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector xp = x;
    Vector xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testsupport
