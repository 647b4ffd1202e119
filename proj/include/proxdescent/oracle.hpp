#pragma once

#include <functional>
#include <vector>

#include "proxdescent/core.hpp"

namespace proxdescent::oracle {

/// Grid argmin of h(z) + (w/2)(z - y)^2 over [lo, hi]; ties go to the
/// smallest |z|.
double grid_prox_1d(const std::function<double(double)>& h, double y, double w, double lo, double hi, double step);

struct GridSubproblemResult {
  Vector argmin;
  double value = 0.0;
  /// Grid-local minimizers (n = 1 only), ordered by value.
  std::vector<Vector> local_minimizers;
  std::vector<double> local_values;
};

/// Brute-force minimizer of h(c(x) + grad c(x) d) + (mu/2)|d|^2 over
/// |d|_inf <= radius, n <= 2. One dimension: a full grid at spacing `step`.
/// Two dimensions: nested zoomed one-dimensional grid scans (the model must
/// be convex there so that the partial minimum over d_1 is unimodal).
GridSubproblemResult grid_subproblem(const ProblemInstance& p, const Vector& x, double mu, double radius, double step);

/// Central differences, one column per coordinate, with per-coordinate step
/// h_step * max(1, |x_i|).
Matrix fd_jacobian(const SmoothMap& map, const Vector& x, double h_step = 1e-6);

/// |J - J_fd|_F / max(1, |J|_F).
double jacobian_relative_error(const SmoothMap& map, const Vector& x, double h_step = 1e-6);

}  // namespace proxdescent::oracle
