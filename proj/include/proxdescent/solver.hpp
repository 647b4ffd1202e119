#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxdescent/core.hpp"
#include "proxdescent/subproblem.hpp"

namespace proxdescent {

enum class SolverStatus {
  Running,
  Critical,
  MaxIters,
  SubproblemNoDescent,
  SubproblemTolFail,
  MuOverflow,
  RestorationFail,
};

std::string to_string(SolverStatus s);

struct SolverState {
  int k = 0;
  Vector x;
  double obj = 0.0;
  double mu = 0.0;
  double final_crit = 0.0;  ///< criticality measure of the last subproblem solved
  std::vector<IterateRecord> trace;
  SolverStatus status = SolverStatus::Running;
  std::string message;
  /// Multiplier and model point of the last subproblem solved, accepted or not.
  Vector last_multiplier;
  Vector last_model_point;
};

/// Maps the trial point x + d to x^+. Returning nullopt signals failure.
struct RestorationHook {
  std::function<std::optional<Vector>(const Vector& x_plus_d, const Vector& d, const ProblemInstance& p)> restore;

  static RestorationHook identity();
  /// Componentwise clamp to [lower, upper].
  static RestorationHook box_clamp(Vector lower, Vector upper);
};

/// The hook matching the problem's outer function: box clamp for box
/// indicator composites, identity otherwise.
RestorationHook default_hook(const ProblemInstance& p);

/// Sufficient decrease plus the restoration distance bound
/// |x^+ - (x + d)| <= |d| / 2.
bool check_acceptance(double obj_x, double obj_xplus, double pred, const Vector& x_plus, const Vector& x_plus_d,
                      const Vector& d, double sigma);
/// Same test with the actual decrease obj(x) - obj(x^+) supplied directly.
bool check_acceptance(double actual_decrease, double pred, const Vector& x_plus, const Vector& x_plus_d,
                      const Vector& d, double sigma);

/// mu |d|.
double criticality_measure(const Vector& d, double mu);

SolverState proxdescent_run(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg,
                            const RestorationHook& hook);

inline SolverState proxdescent_run(const ProblemInstance& p, const SolveConfig& cfg) {
  return proxdescent_run(p, p.x0, cfg, default_hook(p));
}

}  // namespace proxdescent
