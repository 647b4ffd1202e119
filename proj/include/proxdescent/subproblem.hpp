#pragma once

#include <vector>

#include "proxdescent/core.hpp"
#include "proxdescent/outer.hpp"

namespace proxdescent {

/// An iterative subproblem solver hit its iteration cap before reaching the
/// requested certificate.
class SubproblemTolFail : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Solution of min_d h(c + G d) + (mu/2)|d|^2 at a given (x, mu).
struct SubproblemResult {
  Vector d;
  Vector v;  ///< multiplier: G^T v + mu d = 0, v in dh(c + G d)
  Vector z;  ///< c + G d
  ExtReal lin_value;
  double model_value = 0.0;
  bool descent = false;
  double gap = 0.0;  ///< certificate; 0 for closed-form paths
  int iterations = 0;
  bool tie = false;  ///< a nonconvex prox had several global candidates
  Vector weights;    ///< simplex weights, polyhedral path only
};

/// Closed form for c(x) = (f(x), x) and h(f, x) = f + reg_weight * r(x):
/// z = prox of r at y = x - grad_f / mu, d = z - x.
SubproblemResult solve_regularized(double f_val, const Vector& grad_f, const Vector& x,
                                   const RegularizedComposite& h, double mu,
                                   ProxPolicy policy = ProxPolicy::GlobalCandidate);

/// Projected-gradient ascent on the simplex dual of the polyhedral
/// subproblem. Throws SubproblemTolFail after 10 * |I| * 1000 iterations
/// without gap <= tol_gap.
SubproblemResult solve_polyhedral(const Vector& c_x, const Matrix& g, const PolyhedralMax& h, double mu,
                                  double tol_gap = 1e-10);

/// Primal-dual hybrid gradient for any convex h with a prox. Throws
/// SubproblemTolFail after 50000 iterations.
SubproblemResult solve_generic_convex(const Vector& c_x, const Matrix& g, const OuterFunction& h, double mu,
                                      double tol_gap = 1e-10);

/// Every local minimizer of the scalar model, ordered by model value. The
/// first entry is the global minimizer.
std::vector<SubproblemResult> solve_scalar_piecewise(double c_x, double g, const ScalarPiecewise& h, double mu);

/// Solves the subproblem for `p` at x using the most exact solver available
/// for its outer function.
SubproblemResult solve_subproblem(const ProblemInstance& p, const Vector& x, const Vector& c_x, const Matrix& jac,
                                  double mu, const SolveConfig& cfg);

SubproblemResult solve_subproblem(const ProblemInstance& p, const Vector& x, double mu, const SolveConfig& cfg);

/// |G^T v + mu d|.
double stationarity_residual(const Matrix& g, const SubproblemResult& r, double mu);

/// h(c + G d) + (mu/2)|d|^2, evaluated independently of any solver.
ExtReal model_value(const OuterFunction& h, const Vector& c_x, const Matrix& g, const Vector& d, double mu);

}  // namespace proxdescent
