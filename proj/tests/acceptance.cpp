// Runs the release acceptance checks and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "proxdescent/identify.hpp"
#include "proxdescent/outer.hpp"
#include "proxdescent/problems.hpp"
#include "proxdescent/solver.hpp"
#include "proxdescent/subproblem.hpp"

using namespace proxdescent;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

ProblemInstance packaged(const std::string& name) { return load_instance(default_data_dir() / (name + ".inst")); }

double shrink_reference(double y, double a) {
  if (y > a) return y - a;
  if (y < -a) return y + a;
  return 0.0;
}

Outcome shrink_conformance() {
  const auto t0 = Clock::now();
  constexpr int kSide = 100;
  Vector ys(kSide);
  for (int i = 0; i < kSide; ++i) ys(i) = -5.0 + 10.0 * i / (kSide - 1);
  int mismatches = 0;
  for (int j = 0; j < kSide; ++j) {
    const double alpha = 3.0 * j / (kSide - 1);
    const Vector z = shrink(ys, alpha);
    for (int i = 0; i < kSide; ++i)
      if (z(i) != shrink_reference(ys(i), alpha)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 1.0,
          std::to_string(kSide * kSide) + " points, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.3f s", secs)};
}

Outcome check_rows(cli::CheckScope scope) {
  const std::vector<cli::CheckRow> rows = cli::run_checks(scope, default_data_dir());
  bool ok = !rows.empty();
  std::string worst;
  double worst_ratio = -1.0;
  int cases = 0;
  for (const auto& r : rows) {
    ok = ok && r.pass;
    cases += r.cases;
    const double ratio = r.tolerance > 0.0 ? r.max_error / r.tolerance : 0.0;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = r.suite + "/" + r.name + " " + fmt("%.2e", r.max_error) + " vs " + fmt("%.0e", r.tolerance);
    }
  }
  return {ok, std::to_string(rows.size()) + " rows, " + std::to_string(cases) + " cases, worst " + worst};
}

Outcome jump_example() {
  const auto t0 = Clock::now();
  const auto h = make_jump_example();
  const auto two = solve_scalar_piecewise(1.0, 1.0, *h, 4.0);
  const auto one = solve_scalar_piecewise(0.5, 1.0, *h, 1.0);
  const double secs = seconds_since(t0);
  bool ok = two.size() == 2 && one.size() == 1;
  if (ok) {
    ok = std::abs(two[0].d(0) + 0.25) <= 1e-6 && std::abs(two[1].d(0) + 1.0) <= 1e-6 &&
         std::abs(two[0].model_value - 1.875) <= 1e-9 && std::abs(two[1].model_value - 2.0) <= 1e-9 &&
         std::abs(one[0].d(0) + 0.5) <= 1e-6;
  }
  std::ostringstream os;
  os << "x=1 mu=4: " << two.size() << " minimizers";
  for (const auto& r : two) os << " d=" << r.d(0) << " value=" << r.model_value;
  os << "; x=0.5 mu=1: " << one.size() << " minimizer";
  if (!one.empty()) os << " d=" << one[0].d(0);
  os << "; " << fmt("%.4f s", secs);
  return {ok && secs < 1.0, os.str()};
}

Outcome descent_and_decrease() {
  const SolveConfig cfg;
  bool ok = true;
  int steps = 0;
  double slowest = 0.0;
  std::string failures;
  for (const ManifestEntry& e : read_manifest(default_data_dir())) {
    const ProblemInstance p = load_instance(default_data_dir() / e.file);
    const auto t0 = Clock::now();
    const SolverState st = proxdescent_run(p, cfg);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    bool inst_ok = secs < 30.0 && st.status != SolverStatus::Running;
    double prev_eval = composite_eval(p, p.x0).value();
    for (const IterateRecord& r : st.trace) {
      ++steps;
      // Decrease of the accepted step against sigma (mu/2)|d|^2.
      inst_ok = inst_ok && r.actual_decrease >= cfg.sigma * 0.5 * r.mu_used * r.d_norm * r.d_norm;
      inst_ok = inst_ok && r.obj_next <= r.obj;
      // Independent evaluation of the objective along the iterates.
      const double eval = composite_eval(p, r.x).value();
      inst_ok = inst_ok && eval <= prev_eval + 8.0 * 2.2e-16 * (1.0 + std::abs(prev_eval));
      prev_eval = eval;
    }
    const double final_eval = composite_eval(p, st.x).value();
    inst_ok = inst_ok && final_eval <= prev_eval + 8.0 * 2.2e-16 * (1.0 + std::abs(prev_eval));
    if (!inst_ok) failures += " " + e.name + "(" + to_string(st.status) + ")";
    ok = ok && inst_ok;
  }
  return {ok, std::to_string(steps) + " accepted steps over all packaged instances, slowest run " +
                  fmt("%.3f s", slowest) + (failures.empty() ? "" : "; failing:" + failures)};
}

Outcome criticality() {
  const SolveConfig cfg;
  bool ok = true;
  std::ostringstream os;
  for (const std::string name : {"cs_small", "matcomp10", "minimax4", "box_small"}) {
    const ProblemInstance p = packaged(name);
    const SolverState st = proxdescent_run(p, cfg);
    const bool sub = p.outer->subgrad_residual(st.last_model_point, st.last_multiplier, 1e-6);
    const bool inst_ok = st.status == SolverStatus::Critical && st.final_crit <= 1e-8 && st.k <= 10000 && sub;
    ok = ok && inst_ok;
    os << name << " " << to_string(st.status) << " k=" << st.k << " crit=" << fmt("%.2e", st.final_crit)
       << (sub ? " subgrad ok" : " subgrad FAIL") << "; ";
  }
  return {ok, os.str()};
}

Outcome identification() {
  const SolveConfig cfg;
  int sparse_hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const InstanceFile f = generate(Family::LeastSquaresL1, GenDims{}, seed);
    const ProblemInstance p = build_problem(f);
    const SolverState st = proxdescent_run(p, cfg);
    const IdentificationReport rep = build_report(st.trace, p);
    std::vector<int> planted(static_cast<std::size_t>(p.n()), 0);
    for (int i : f.int_list("support")) planted[static_cast<std::size_t>(i)] = (*p.known_solution)(i) > 0.0 ? 1 : -1;
    const bool hit = st.status == SolverStatus::Critical && rep.stabilized_at.has_value() &&
                     *rep.stabilized_at < static_cast<int>(st.trace.size()) && rep.final_signature.data == planted;
    sparse_hits += hit ? 1 : 0;
  }

  int poly_hits = 0;
  double worst_residual = 0.0;
  double min_weight = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const InstanceFile f = generate(Family::PolyhedralMinimax, GenDims{}, seed);
    const ProblemInstance p = build_problem(f);
    const auto& h = dynamic_cast<const PolyhedralMax&>(*p.outer);
    const SolverState st = proxdescent_run(p, cfg);
    const IdentificationReport rep = build_report(st.trace, p);
    std::vector<int> planted(static_cast<std::size_t>(h.num_pieces()));
    for (int i = 0; i < h.num_pieces(); ++i) planted[static_cast<std::size_t>(i)] = i;
    const PolyhedralMultipliers mult =
        recover_polyhedral_multipliers(h, p.map.jacobian(st.x), p.map.value(st.x), 1e-6);
    worst_residual = std::max(worst_residual, mult.residual);
    min_weight = std::min(min_weight, mult.min_weight);
    const bool hit = st.status == SolverStatus::Critical && rep.stabilized_at.has_value() &&
                     rep.final_signature.data == planted && mult.active == planted && mult.residual <= 1e-6 &&
                     mult.min_weight > 0.0;
    poly_hits += hit ? 1 : 0;
  }
  return {sparse_hits >= 9 && poly_hits == 10,
          "sparse support identified in " + std::to_string(sparse_hits) + "/10, polyhedral active set in " +
              std::to_string(poly_hits) + "/10, worst multiplier residual " + fmt("%.2e", worst_residual) +
              ", smallest weight " + fmt("%.3f", min_weight)};
}

// Multiplier convergence on the packaged polyhedral instance. The run ends
// after few accepted iterations, so the check applies to the trailing part
// of the last ten that lies within 1e-4 of the limit.
Outcome multiplier_convergence() {
  const ProblemInstance p = packaged("minimax4");
  const auto& h = dynamic_cast<const PolyhedralMax&>(*p.outer);
  std::vector<int> all(static_cast<std::size_t>(h.num_pieces()));
  for (int i = 0; i < h.num_pieces(); ++i) all[static_cast<std::size_t>(i)] = i;
  const PolyhedralMultipliers limit = solve_multiplier_system(h, p.map.jacobian(*p.known_solution), all);

  const SolverState st = proxdescent_run(p, SolveConfig{});
  const std::size_t n = st.trace.size();
  const std::size_t first = n > 10 ? n - 10 : 0;
  std::vector<double> err;
  for (std::size_t i = first; i < n; ++i) err.push_back((st.trace[i].multiplier - limit.v).norm());

  std::size_t tail = err.size();
  while (tail > 0 && err[tail - 1] <= 1e-4) --tail;
  bool monotone = true;
  for (std::size_t i = tail + 1; i < err.size(); ++i) monotone = monotone && err[i] <= err[i - 1];
  const bool ok = !err.empty() && tail < err.size() && monotone && err.back() <= 1e-6 &&
                  limit.residual <= 1e-10;

  std::ostringstream os;
  os << n << " accepted iterations; |v_k - v|:";
  for (double e : err) os << ' ' << fmt("%.1e", e);
  os << "; " << (err.size() - tail) << " trailing within 1e-4, " << (monotone ? "monotone" : "not monotone");
  return {ok, os.str()};
}

Outcome restoration_conditions() {
  const SolveConfig cfg;
  const ProblemInstance p = packaged("box_small");
  const SolverState st = proxdescent_run(p, cfg);
  bool ok = st.status == SolverStatus::Critical && !st.trace.empty();
  int clamped = 0;
  double worst_offset_ratio = 0.0;
  for (const IterateRecord& r : st.trace) {
    ok = ok && r.restoration_offset <= 0.5 * r.d_norm && r.actual_decrease >= cfg.sigma * r.pred_decrease;
    if (r.restoration_offset > 0.0) ++clamped;
    if (r.d_norm > 0.0) worst_offset_ratio = std::max(worst_offset_ratio, r.restoration_offset / r.d_norm);
  }
  return {ok, std::to_string(st.trace.size()) + " accepted steps, " + std::to_string(clamped) +
                  " restored by clamping, max |x+ - (x+d)|/|d| = " + fmt("%.3f", worst_offset_ratio)};
}

Outcome jacobian_gate() {
  const Outcome jac = check_rows(cli::CheckScope::Jacobian);
  std::ostringstream sink;
  const int code = cli::cmd_check(cli::CheckScope::All, default_data_dir(), sink);
  return {jac.pass && code == 0, "jacobian: " + jac.detail + "; check all exit " + std::to_string(code)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "shrink conformance", shrink_conformance},
      {2, "prox oracle equivalence", [] { return check_rows(cli::CheckScope::Prox); }},
      {3, "subproblem oracle equivalence", [] { return check_rows(cli::CheckScope::Subproblem); }},
      {4, "two local minimizers example", jump_example},
      {5, "descent and decrease", descent_and_decrease},
      {6, "criticality", criticality},
      {7, "identification", identification},
      {8, "multiplier convergence", multiplier_convergence},
      {9, "restoration conditions", restoration_conditions},
      {10, "jacobian gate", jacobian_gate},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-30s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
