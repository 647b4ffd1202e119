#include "proxdescent/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "proxdescent/simplex.hpp"

namespace proxdescent {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt17(v(i));
  return s + "]";
}

}  // namespace

std::optional<std::size_t> stabilization_index(const std::vector<ManifoldSignature>& sigs, std::size_t min_trailing) {
  if (sigs.empty()) return std::nullopt;
  std::size_t first = sigs.size() - 1;
  while (first > 0 && sigs[first - 1] == sigs.back()) --first;
  if (sigs.size() - first < min_trailing) return std::nullopt;
  return first;
}

IdentificationReport build_report(const std::vector<IterateRecord>& trace, const ProblemInstance& p,
                                  const ReportOptions& opts) {
  IdentificationReport rep;
  std::vector<ManifoldSignature> sigs;
  for (const IterateRecord& rec : trace) {
    const ManifoldSignature sig = p.outer->signature(rec.model_point, opts.signature_tol);
    rep.signatures.emplace_back(rec.k, sig);
    sigs.push_back(sig);
    rep.multipliers.emplace_back(rec.k, rec.multiplier);

    const Matrix jac = p.map.jacobian(rec.x);
    const double stat = (jac.transpose() * rec.multiplier + rec.mu_used * rec.d).norm() /
                        (1.0 + rec.mu_used * rec.d.norm());
    rep.max_stationarity = std::max(rep.max_stationarity, stat);
    if (!p.outer->subgrad_residual(rec.model_point, rec.multiplier, opts.subgrad_tol))
      rep.multipliers_in_subdifferential = false;
  }
  if (!sigs.empty()) rep.final_signature = sigs.back();
  if (const auto idx = stabilization_index(sigs)) rep.stabilized_at = trace[*idx].k;

  constexpr std::size_t kTail = 5;
  if (trace.size() >= kTail) {
    const Vector& last = trace.back().multiplier;
    double spread = 0.0;
    for (std::size_t i = trace.size() - kTail; i < trace.size(); ++i)
      spread = std::max(spread, (trace[i].multiplier - last).norm());
    if (spread <= opts.multiplier_tol) rep.multiplier_limit = last;
  }
  return rep;
}

namespace {

PolyhedralMultipliers finish_multipliers(const PolyhedralMax& h, const Matrix& jac, std::vector<int> active,
                                         const Vector& lambda) {
  PolyhedralMultipliers out;
  out.active = std::move(active);
  out.lambda = lambda;
  out.v = Vector::Zero(h.dim());
  Vector stat = Vector::Zero(jac.cols());
  for (std::size_t k = 0; k < out.active.size(); ++k) {
    const Vector hi = h.slopes().col(out.active[k]);
    out.v += lambda(static_cast<Eigen::Index>(k)) * hi;
    stat += lambda(static_cast<Eigen::Index>(k)) * (jac.transpose() * hi);
  }
  const double sum_err = lambda.sum() - 1.0;
  out.residual = std::sqrt(stat.squaredNorm() + sum_err * sum_err);
  out.min_weight = lambda.size() ? lambda.minCoeff() : 0.0;
  return out;
}

Matrix system_matrix(const PolyhedralMax& h, const Matrix& jac, const std::vector<int>& active) {
  Matrix a(jac.cols() + 1, static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    a.col(col).head(jac.cols()) = jac.transpose() * h.slopes().col(active[k]);
    a(jac.cols(), col) = 1.0;
  }
  return a;
}

}  // namespace

PolyhedralMultipliers recover_polyhedral_multipliers(const PolyhedralMax& h, const Matrix& jac, const Vector& c,
                                                     double active_tol) {
  std::vector<int> active = h.active_set(c, active_tol);
  const Matrix a = system_matrix(h, jac, active).topRows(jac.cols());
  const SimplexQpResult qp = simplex_qp(a.transpose() * a, Vector::Zero(a.cols()), 100000, nullptr);
  return finish_multipliers(h, jac, std::move(active), qp.lambda);
}

PolyhedralMultipliers solve_multiplier_system(const PolyhedralMax& h, const Matrix& jac,
                                              const std::vector<int>& active) {
  const Matrix a = system_matrix(h, jac, active);
  Vector rhs = Vector::Zero(a.rows());
  rhs(a.rows() - 1) = 1.0;
  const Vector lambda = a.colPivHouseholderQr().solve(rhs);
  return finish_multipliers(h, jac, active, lambda);
}

std::string format_report(const IdentificationReport& r) {
  std::ostringstream os;
  os << "iterations: " << r.signatures.size() << '\n';
  os << "stabilized_at: " << (r.stabilized_at ? std::to_string(*r.stabilized_at) : "none") << '\n';
  os << "final_signature: " << r.final_signature.str() << '\n';
  os << "max_stationarity: " << fmt17(r.max_stationarity) << '\n';
  os << "multipliers_in_subdifferential: " << (r.multipliers_in_subdifferential ? "true" : "false") << '\n';
  os << "multiplier_limit: " << (r.multiplier_limit ? fmt_vec(*r.multiplier_limit) : "none") << '\n';
  os << "signatures:\n";
  for (const auto& [k, sig] : r.signatures) os << "  " << k << ": " << sig.str() << '\n';
  return os.str();
}

}  // namespace proxdescent
