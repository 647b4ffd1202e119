#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "proxdescent/identify.hpp"
#include "proxdescent/oracle.hpp"
#include "proxdescent/outer.hpp"
#include "proxdescent/problems.hpp"
#include "proxdescent/subproblem.hpp"

namespace proxdescent::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int exit_code(SolverStatus s) {
  switch (s) {
    case SolverStatus::Critical: return kOk;
    case SolverStatus::MaxIters: return kMaxIters;
    default: return kSolverFailure;
  }
}

std::string trace_csv(const std::vector<IterateRecord>& trace) {
  std::ostringstream os;
  os << "k,obj,mu,d_norm,pred_decrease,actual_decrease,crit_measure,signature,inner_rejections\n";
  for (const IterateRecord& r : trace) {
    os << r.k << ',' << fmt(r.obj) << ',' << fmt(r.mu_used) << ',' << fmt(r.d_norm) << ',' << fmt(r.pred_decrease)
       << ',' << fmt(r.actual_decrease) << ',' << fmt(r.crit_measure) << ',' << csv_field(r.signature.str()) << ','
       << r.inner_rejections << '\n';
  }
  return os.str();
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  ProblemInstance p;
  try {
    p = load_instance(opts.instance);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kLoadError;
  }
  try {
    opts.config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kLoadError;
  }

  const SolverState st = proxdescent_run(p, opts.config);
  const IdentificationReport rep = build_report(st.trace, p);
  try {
    if (opts.trace_out) write_file(*opts.trace_out, trace_csv(st.trace));
    if (opts.report_out) {
      std::ostringstream os;
      os << "instance: " << p.name << '\n'
         << "family: " << p.family << '\n'
         << "status: " << to_string(st.status) << '\n'
         << "objective: " << fmt(st.obj) << '\n'
         << "crit_measure: " << fmt(st.final_crit) << '\n'
         << format_report(rep);
      write_file(*opts.report_out, os.str());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }

  out << "instance: " << p.name << '\n'
      << "status: " << to_string(st.status) << '\n'
      << "iterations: " << st.k << '\n'
      << "objective: " << fmt(st.obj) << '\n'
      << "crit_measure: " << fmt(st.final_crit) << '\n'
      << "stabilized_at: " << (rep.stabilized_at ? std::to_string(*rep.stabilized_at) : "none") << '\n';
  if (!st.message.empty()) out << "message: " << st.message << '\n';
  return exit_code(st.status);
}

std::optional<CheckScope> parse_scope(const std::string& s) {
  if (s == "prox") return CheckScope::Prox;
  if (s == "subproblem") return CheckScope::Subproblem;
  if (s == "jacobian") return CheckScope::Jacobian;
  if (s == "all") return CheckScope::All;
  return std::nullopt;
}

namespace {

constexpr double kProxTol = 2e-4;
constexpr double kSubTol = 2e-4;
constexpr double kJacTol = 1e-5;

CheckRow prox_row(const std::string& name, const Regularizer& reg, const std::function<double(double)>& h,
                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ydist(-3.0, 3.0);
  std::uniform_real_distribution<double> wdist(0.2, 5.0);
  CheckRow row{"prox", name, 0, 0.0, kProxTol, true};
  for (int i = 0; i < 100; ++i) {
    const double y = ydist(rng);
    const double w = wdist(rng);
    const double z = reg.prox(Vector::Constant(1, y), w, ProxPolicy::GlobalCandidate)(0);
    const double zg = oracle::grid_prox_1d(h, y, w, y - std::abs(y) - 10.0, y + std::abs(y) + 10.0, 1e-4);
    row.max_error = std::max(row.max_error, std::abs(z - zg));
    ++row.cases;
  }
  row.pass = row.max_error <= row.tolerance;
  return row;
}

std::vector<CheckRow> prox_checks() {
  std::mt19937_64 rng(20240601);
  std::vector<CheckRow> rows;
  rows.push_back(prox_row("l1", L1Norm(1), [](double z) { return std::abs(z); }, rng));
  rows.push_back(prox_row("huber", HuberSum(1, 1.0), [](double z) { return huber_phi(z, 1.0); }, rng));
  rows.push_back(prox_row("group_l2_size1", GroupL2Norm(std::vector<std::vector<int>>{{0}}), [](double z) { return std::abs(z); }, rng));
  rows.push_back(prox_row("mangasarian", MangasarianExp(1, 2.0),
                          [](double z) { return 1.0 - std::exp(-2.0 * std::abs(z)); }, rng));
  rows.push_back(prox_row("zhang", ZhangPhi(1, 0.5, 3.0), [](double z) { return zhang_phi(z, 0.5, 3.0); }, rng));

  CheckRow nuc{"prox", "nuclear_diag5", 0, 0.0, 1e-10, true};
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> wd(0.2, 5.0);
  for (int i = 0; i < 100; ++i) {
    Vector diag(5);
    for (int j = 0; j < 5; ++j) diag(j) = u(rng);
    const double w = wd(rng);
    const double reg = 0.5 + std::abs(u(rng));
    const Matrix z = nuclear_prox(Matrix(diag.asDiagonal()), w, reg);
    const Matrix expect = Matrix(shrink(diag, reg / w).asDiagonal());
    nuc.max_error = std::max(nuc.max_error, (z - expect).norm());
    ++nuc.cases;
  }
  nuc.pass = nuc.max_error <= nuc.tolerance;
  rows.push_back(nuc);
  return rows;
}

ProblemInstance affine_instance(const Vector& c_x, const Matrix& g, OuterPtr h) {
  ProblemInstance p;
  p.name = "affine";
  p.map.dim_in = static_cast<int>(g.cols());
  p.map.dim_out = static_cast<int>(g.rows());
  p.map.value = [c_x, g](const Vector& x) -> Vector { return c_x + g * x; };
  p.map.jacobian = [g](const Vector&) { return g; };
  p.outer = std::move(h);
  p.x0 = Vector::Zero(g.cols());
  return p;
}

Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

void record_sub(CheckRow& row, const ProblemInstance& p, const Vector& x, const Matrix& g, const SubproblemResult& r,
                double mu, double radius) {
  const auto grid = oracle::grid_subproblem(p, x, mu, radius, 1e-5);
  const double err = (r.d - grid.argmin).cwiseAbs().maxCoeff();
  const double stat = stationarity_residual(g, r, mu);
  row.max_error = std::max(row.max_error, err);
  if (stat > 1e-8 * (1.0 + mu * r.d.norm())) row.pass = false;
  ++row.cases;
}

std::vector<CheckRow> subproblem_checks() {
  std::mt19937_64 rng(20240602);
  std::uniform_real_distribution<double> mud(0.5, 5.0);
  std::uniform_real_distribution<double> taud(0.1, 1.0);
  std::vector<CheckRow> rows;

  CheckRow reg{"subproblem", "regularized_l1", 0, 0.0, kSubTol, true};
  for (int i = 0; i < 25; ++i) {
    const Matrix a = gaussian(rng, 3, 2);
    const Vector b = gaussian(rng, 3, 1);
    const Vector x = gaussian(rng, 2, 1);
    const double tau = taud(rng);
    const double mu = mud(rng);
    const auto h = std::make_shared<RegularizedComposite>(std::make_shared<L1Norm>(2), tau);
    ProblemInstance p;
    p.map.dim_in = 2;
    p.map.dim_out = 3;
    p.map.value = [a, b](const Vector& xx) {
      Vector c(3);
      c(0) = 0.5 * (a * xx - b).squaredNorm();
      c.tail(2) = xx;
      return c;
    };
    p.map.jacobian = [a, b](const Vector& xx) {
      Matrix j = Matrix::Zero(3, 2);
      j.row(0) = (a.transpose() * (a * xx - b)).transpose();
      j.bottomRows(2).setIdentity();
      return j;
    };
    p.outer = h;
    p.structure = InnerStructure::Regularized;
    const Vector grad = a.transpose() * (a * x - b);
    const SubproblemResult r = solve_regularized(p.map.value(x)(0), grad, x, *h, mu);
    const double radius = (grad.norm() + 2.0 * tau) / mu + 1.0;
    record_sub(reg, p, x, p.map.jacobian(x), r, mu, radius);
  }
  reg.pass = reg.pass && reg.max_error <= reg.tolerance;
  rows.push_back(reg);

  CheckRow poly{"subproblem", "polyhedral", 0, 0.0, kSubTol, true};
  for (int i = 0; i < 25; ++i) {
    const Matrix slopes = gaussian(rng, 3, 4);
    const Vector offsets = gaussian(rng, 4, 1);
    const Vector c_x = gaussian(rng, 3, 1);
    const Matrix g = gaussian(rng, 3, 2);
    const double mu = mud(rng);
    const auto h = std::make_shared<PolyhedralMax>(slopes, offsets);
    const ProblemInstance p = affine_instance(c_x, g, h);
    const SubproblemResult r = solve_polyhedral(c_x, g, *h, mu);
    double bound = 0.0;
    for (int k = 0; k < 4; ++k) bound = std::max(bound, (g.transpose() * slopes.col(k)).norm());
    record_sub(poly, p, Vector::Zero(2), g, r, mu, bound / mu + 1.0);
  }
  poly.pass = poly.pass && poly.max_error <= poly.tolerance;
  rows.push_back(poly);

  CheckRow gen{"subproblem", "generic_convex", 0, 0.0, kSubTol, true};
  for (int i = 0; i < 25; ++i) {
    const Vector c_x = gaussian(rng, 3, 1);
    const Matrix g = gaussian(rng, 3, 2);
    const double mu = mud(rng);
    OuterPtr h;
    double lip = 1.0;
    switch (i % 3) {
      case 0:
        h = std::make_shared<RegularizerOuter>(std::make_shared<L1Norm>(3), 1.0);
        lip = std::sqrt(3.0);
        break;
      case 1:
        h = std::make_shared<RegularizerOuter>(std::make_shared<HuberSum>(3, 0.5), 1.0);
        lip = 0.5 * std::sqrt(3.0);
        break;
      default:
        h = std::make_shared<RegularizerOuter>(std::make_shared<GroupL2Norm>(std::vector<std::vector<int>>{{0, 1}, {2}}),
                                               1.0);
        lip = std::sqrt(2.0);
        break;
    }
    const ProblemInstance p = affine_instance(c_x, g, h);
    const SubproblemResult r = solve_generic_convex(c_x, g, *h, mu);
    record_sub(gen, p, Vector::Zero(2), g, r, mu, lip * g.norm() / mu + 1.0);
  }
  gen.pass = gen.pass && gen.max_error <= gen.tolerance;
  rows.push_back(gen);
  return rows;
}

std::vector<CheckRow> jacobian_checks(const std::filesystem::path& data_dir) {
  std::vector<CheckRow> rows;
  std::vector<ManifestEntry> entries;
  try {
    entries = read_manifest(data_dir);
  } catch (const std::exception&) {
    rows.push_back(CheckRow{"jacobian", "manifest", 0, 0.0, kJacTol, false});
    return rows;
  }
  std::mt19937_64 rng(20240603);
  std::normal_distribution<double> nd;
  for (const ManifestEntry& e : entries) {
    CheckRow row{"jacobian", e.name, 0, 0.0, kJacTol, true};
    try {
      const ProblemInstance p = load_instance(data_dir / e.file);
      std::vector<Vector> points{p.x0};
      if (p.known_solution) points.push_back(*p.known_solution);
      Vector pert = p.x0;
      for (Eigen::Index i = 0; i < pert.size(); ++i) pert(i) += 0.1 * nd(rng);
      points.push_back(pert);
      for (const Vector& x : points) {
        row.max_error = std::max(row.max_error, oracle::jacobian_relative_error(p.map, x));
        ++row.cases;
      }
      row.pass = row.max_error <= row.tolerance;
    } catch (const std::exception&) {
      row.pass = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<CheckRow> run_checks(CheckScope scope, const std::filesystem::path& data_dir) {
  std::vector<CheckRow> rows;
  auto append = [&rows](std::vector<CheckRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  if (scope == CheckScope::Prox || scope == CheckScope::All) append(prox_checks());
  if (scope == CheckScope::Subproblem || scope == CheckScope::All) append(subproblem_checks());
  if (scope == CheckScope::Jacobian || scope == CheckScope::All) append(jacobian_checks(data_dir));
  return rows;
}

int cmd_check(CheckScope scope, const std::filesystem::path& data_dir, std::ostream& out) {
  const std::vector<CheckRow> rows = run_checks(scope, data_dir);
  bool all = !rows.empty();
  char line[256];
  std::snprintf(line, sizeof line, "%-11s %-16s %6s %-24s %-10s %s\n", "suite", "name", "cases", "max_error",
                "tolerance", "result");
  out << line;
  for (const CheckRow& r : rows) {
    std::snprintf(line, sizeof line, "%-11s %-16s %6d %-24s %-10.3g %s\n", r.suite.c_str(), r.name.c_str(), r.cases,
                  fmt(r.max_error).c_str(), r.tolerance, r.pass ? "pass" : "FAIL");
    out << line;
    all = all && r.pass;
  }
  return all ? kOk : kLoadError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prox-linear descent for composite nonsmooth minimization"};
  app.require_subcommand(1);

  SolveOptions solve;
  std::string policy = "global";
  std::string trace_out;
  std::string report_out;
  std::string instance;
  auto* s = app.add_subcommand("solve", "Solve an instance file");
  s->add_option("instance", instance, "Instance file")->required();
  s->add_option("--tau", solve.config.tau, "mu increase factor on rejection")->capture_default_str();
  s->add_option("--sigma", solve.config.sigma, "sufficient decrease fraction")->capture_default_str();
  s->add_option("--mu0", solve.config.mu0, "initial prox parameter")->capture_default_str();
  s->add_option("--mu-min", solve.config.mu_min, "lower bound on mu")->capture_default_str();
  s->add_option("--mu-max", solve.config.mu_max, "overflow threshold on mu")->capture_default_str();
  s->add_option("--tol", solve.config.tol_crit, "criticality tolerance on mu|d|")->capture_default_str();
  s->add_option("--max-iters", solve.config.max_iters, "iteration cap")->capture_default_str();
  s->add_option("--policy", policy, "nonconvex prox policy")
      ->check(CLI::IsMember({"global", "nearest"}))
      ->capture_default_str();
  s->add_option("--trace-out", trace_out, "CSV trace path");
  s->add_option("--report-out", report_out, "identification report path");

  std::string scope = "all";
  std::string data_dir = default_data_dir().string();
  auto* c = app.add_subcommand("check", "Compare solvers against brute-force oracles");
  c->add_option("scope", scope, "prox, subproblem, jacobian or all")
      ->check(CLI::IsMember({"prox", "subproblem", "jacobian", "all"}))
      ->capture_default_str();
  c->add_option("--data-dir", data_dir, "packaged instance directory")->capture_default_str();

  std::string family;
  std::string output;
  std::string packaged_dir;
  std::uint64_t seed = 0;
  GenDims dims;
  auto* g = app.add_subcommand("generate", "Write a generated instance or the packaged set");
  g->add_option("family", family, "instance family");
  g->add_option("--seed", seed, "random seed")->capture_default_str();
  g->add_option("--n", dims.n, "variables");
  g->add_option("--m", dims.m, "rows or observations");
  g->add_option("--support", dims.support, "planted support size");
  g->add_option("--pieces", dims.pieces, "polyhedral pieces");
  g->add_option("--rows", dims.rows, "matrix rows");
  g->add_option("--cols", dims.cols, "matrix columns");
  g->add_option("--rank", dims.rank, "planted rank");
  g->add_option("--group-size", dims.group_size, "group size");
  g->add_option("--variant", dims.variant, "mangasarian or zhang");
  g->add_option("-o,--output", output, "output file (default stdout)");
  g->add_option("--packaged", packaged_dir, "write every packaged instance and the manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kLoadError;
  }

  if (s->parsed()) {
    solve.instance = instance;
    solve.config.prox_policy = policy == "nearest" ? ProxPolicy::NearestLocal : ProxPolicy::GlobalCandidate;
    if (!trace_out.empty()) solve.trace_out = trace_out;
    if (!report_out.empty()) solve.report_out = report_out;
    return cmd_solve(solve, out, err);
  }
  if (c->parsed()) return cmd_check(*parse_scope(scope), data_dir, out);

  try {
    if (!packaged_dir.empty()) {
      write_packaged_instances(packaged_dir);
      out << "wrote packaged instances to " << packaged_dir << '\n';
      return kOk;
    }
    const auto fam = family_from_string(family);
    if (!fam) {
      err << "error: unknown family '" << family << "'\n";
      return kLoadError;
    }
    const std::string text = write_instance(generate(*fam, dims, seed));
    if (output.empty())
      out << text;
    else
      write_file(output, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kLoadError;
  }
  return kOk;
}

}  // namespace proxdescent::cli
