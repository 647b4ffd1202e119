#pragma once

#include "proxdescent/core.hpp"

#include <functional>

namespace proxdescent {

/// Euclidean projection onto the unit simplex {l >= 0, sum l = 1}.
/// Sort-based, O(k log k).
Vector project_simplex(const Vector& y);

struct SimplexQpResult {
  Vector lambda;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes 0.5 l^T Q l - q^T l over the unit simplex with accelerated
/// projected gradient steps, periodically polishing on the current support by
/// an equality-constrained solve. Stops as soon as `done(lambda)` returns true
/// or after `max_iters` gradient steps.
SimplexQpResult simplex_qp(const Matrix& q_mat, const Vector& q_vec, int max_iters,
                           const std::function<bool(const Vector&)>& done);

/// Distance from v to conv{columns of points}.
double distance_to_hull(const Matrix& points, const Vector& v);

}  // namespace proxdescent
