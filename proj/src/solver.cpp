#include "proxdescent/solver.hpp"

#include <algorithm>
#include <cmath>

namespace proxdescent {

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Running: return "Running";
    case SolverStatus::Critical: return "Critical";
    case SolverStatus::MaxIters: return "MaxIters";
    case SolverStatus::SubproblemNoDescent: return "SubproblemNoDescent";
    case SolverStatus::SubproblemTolFail: return "SubproblemTolFail";
    case SolverStatus::MuOverflow: return "MuOverflow";
    case SolverStatus::RestorationFail: return "RestorationFail";
  }
  return "Unknown";
}

RestorationHook RestorationHook::identity() {
  return {[](const Vector& x_plus_d, const Vector&, const ProblemInstance&) -> std::optional<Vector> {
    return x_plus_d;
  }};
}

RestorationHook RestorationHook::box_clamp(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw DimensionError("box_clamp: bound lengths differ");
  return {[lower = std::move(lower), upper = std::move(upper)](const Vector& x_plus_d, const Vector&,
                                                               const ProblemInstance&) -> std::optional<Vector> {
    if (x_plus_d.size() != lower.size()) return std::nullopt;
    return Vector(x_plus_d.cwiseMax(lower).cwiseMin(upper));
  }};
}

RestorationHook default_hook(const ProblemInstance& p) {
  if (const auto* reg = dynamic_cast<const RegularizedComposite*>(p.outer.get())) {
    if (const auto* box = dynamic_cast<const BoxIndicator*>(&reg->regularizer())) {
      return RestorationHook::box_clamp(box->lower(), box->upper());
    }
  }
  return RestorationHook::identity();
}

bool check_acceptance(double obj_x, double obj_xplus, double pred, const Vector& x_plus, const Vector& x_plus_d,
                      const Vector& d, double sigma) {
  if (!std::isfinite(obj_xplus)) return false;
  return check_acceptance(obj_x - obj_xplus, pred, x_plus, x_plus_d, d, sigma);
}

bool check_acceptance(double actual_decrease, double pred, const Vector& x_plus, const Vector& x_plus_d,
                      const Vector& d, double sigma) {
  if (!std::isfinite(actual_decrease)) return false;
  const bool decrease = actual_decrease >= sigma * pred;
  const bool close = (x_plus - x_plus_d).norm() <= 0.5 * d.norm();
  return decrease && close;
}

double criticality_measure(const Vector& d, double mu) { return mu * d.norm(); }

SolverState proxdescent_run(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg,
                            const RestorationHook& hook) {
  cfg.validate();
  require_dim(x0, p.n(), "proxdescent_run x0");
  const ExtReal obj0 = composite_eval(p, x0);
  if (obj0.is_infinite()) throw std::invalid_argument("proxdescent_run: objective is infinite at x0");

  SolverState st;
  st.x = x0;
  st.obj = obj0.value();
  st.mu = cfg.mu0;

  auto stop = [&](SolverStatus s, std::string msg = {}) {
    st.status = s;
    st.message = std::move(msg);
    return st;
  };

  while (true) {
    if (st.k >= cfg.max_iters) return stop(SolverStatus::MaxIters);
    const Vector c_x = p.map.value(st.x);
    const Matrix jac = p.map.jacobian(st.x);
    int rejections = 0;

    while (true) {
      if (st.mu > cfg.mu_max) return stop(SolverStatus::MuOverflow, "mu exceeded mu_max without an accepted step");

      SubproblemResult sub;
      try {
        sub = solve_subproblem(p, st.x, c_x, jac, st.mu, cfg);
      } catch (const SubproblemTolFail& e) {
        return stop(SolverStatus::SubproblemTolFail, e.what());
      } catch (const SolverError& e) {
        return stop(SolverStatus::SubproblemNoDescent, e.what());
      }

      const double crit = criticality_measure(sub.d, st.mu);
      st.final_crit = crit;
      st.last_multiplier = sub.v;
      st.last_model_point = sub.z;
      // No step with h_{x,mu}(d) < h_{x,mu}(0): x is critical for the model.
      if (!sub.descent || sub.d.isZero(0.0)) return stop(SolverStatus::Critical);

      const Vector x_plus_d = st.x + sub.d;
      const std::optional<Vector> restored = hook.restore(x_plus_d, sub.d, p);
      if (!restored) return stop(SolverStatus::RestorationFail, "restoration hook failed");
      const Vector& x_plus = *restored;
      // Both decreases are evaluated as increments so that they stay
      // accurate when they fall below the resolution of the objective.
      const double pred = -p.outer->increment(c_x, jac * sub.d);
      const double actual = -p.outer->increment(c_x, map_increment(p.map, st.x, x_plus - st.x));

      if (check_acceptance(actual, pred, x_plus, x_plus_d, sub.d, cfg.sigma)) {
        const double obj_next = st.obj - actual;
        IterateRecord rec;
        rec.k = st.k;
        rec.x = st.x;
        rec.obj = st.obj;
        rec.obj_next = obj_next;
        rec.mu_used = st.mu;
        rec.d_norm = sub.d.norm();
        rec.pred_decrease = pred;
        rec.actual_decrease = actual;
        rec.crit_measure = crit;
        rec.restoration_offset = (x_plus - x_plus_d).norm();
        rec.signature = p.outer->signature(sub.z, cfg.signature_tol);
        rec.inner_rejections = rejections;
        rec.d = sub.d;
        rec.multiplier = sub.v;
        rec.model_point = sub.z;
        st.trace.push_back(std::move(rec));

        st.x = x_plus;
        st.obj = obj_next;
        st.mu = std::max(cfg.mu_min, st.mu / cfg.tau);
        ++st.k;
        if (crit <= cfg.tol_crit) return stop(SolverStatus::Critical);
        break;
      }
      // A rejected step this short only reflects rounding in the decrease
      // test; x already meets the stationarity tolerance.
      if (crit <= cfg.tol_crit) return stop(SolverStatus::Critical);
      st.mu *= cfg.tau;
      ++rejections;
    }
  }
}

}  // namespace proxdescent
