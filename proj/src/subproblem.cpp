#include "proxdescent/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "proxdescent/simplex.hpp"

namespace proxdescent {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void finish(SubproblemResult& r, const OuterFunction& h, const Vector& c_x, const Matrix& g, double mu) {
  r.z = c_x + g * r.d;
  r.lin_value = h.eval(r.z);
  r.model_value = r.lin_value.value() + 0.5 * mu * r.d.squaredNorm();
  r.descent = r.lin_value.is_finite() && -h.increment(c_x, g * r.d) > 0.5 * mu * r.d.squaredNorm();
}

double spectral_norm_estimate(const Matrix& g) {
  if (g.size() == 0 || g.isZero(0.0)) return 0.0;
  // Deterministic start vector so results are reproducible.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Vector u(g.cols());
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
  double est = 0.0;
  for (int it = 0; it < 50; ++it) {
    const Vector next = g.transpose() * (g * u);
    const double nrm = next.norm();
    if (nrm == 0.0) break;
    u = next / nrm;
    est = std::sqrt(nrm);
  }
  // Power iteration underestimates; pad so that step sizes stay admissible.
  return std::max(est, (g * u).norm()) * 1.01;
}

}  // namespace

ExtReal model_value(const OuterFunction& h, const Vector& c_x, const Matrix& g, const Vector& d, double mu) {
  return h.eval(c_x + g * d) + 0.5 * mu * d.squaredNorm();
}

double stationarity_residual(const Matrix& g, const SubproblemResult& r, double mu) {
  return (g.transpose() * r.v + mu * r.d).norm();
}

SubproblemResult solve_regularized(double f_val, const Vector& grad_f, const Vector& x, const RegularizedComposite& h,
                                   double mu, ProxPolicy policy) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_regularized: mu must be positive");
  require_dim(grad_f, h.dim() - 1, "solve_regularized grad_f");
  require_dim(x, h.dim() - 1, "solve_regularized x");

  const Vector y = x - grad_f / mu;
  Vector z;
  SubproblemResult r;
  if (const auto* zh = dynamic_cast<const ZhangPhi*>(&h.regularizer()); zh != nullptr && h.reg_weight() > 0.0) {
    z.resize(y.size());
    const double w = mu / h.reg_weight();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const ScalarProx s = zhang_prox(y(i), zh->lambda(), zh->a(), w, policy);
      z(i) = s.z;
      r.tie = r.tie || s.tie;
    }
  } else {
    z = h.penalty_prox(y, mu, policy);
  }
  r.d = z - x;
  r.v.resize(x.size() + 1);
  r.v(0) = 1.0;
  r.v.tail(x.size()) = -mu * r.d - grad_f;
  r.z.resize(x.size() + 1);
  r.z(0) = f_val + grad_f.dot(r.d);
  r.z.tail(x.size()) = z;
  r.lin_value = ExtReal(r.z(0)) + h.penalty(z);
  r.model_value = r.lin_value.value() + 0.5 * mu * r.d.squaredNorm();
  Vector c_x(x.size() + 1);
  c_x << f_val, x;
  Vector dz(x.size() + 1);
  dz << grad_f.dot(r.d), r.d;
  r.descent = r.lin_value.is_finite() && -h.increment(c_x, dz) > 0.5 * mu * r.d.squaredNorm();
  return r;
}

SubproblemResult solve_polyhedral(const Vector& c_x, const Matrix& g, const PolyhedralMax& h, double mu,
                                  double tol_gap) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_polyhedral: mu must be positive");
  require_dim(c_x, h.dim(), "solve_polyhedral c_x");
  if (g.rows() != h.dim()) throw DimensionError("solve_polyhedral: G must have m rows");

  const Matrix& slopes = h.slopes();
  const Matrix mapped = g.transpose() * slopes;  // columns G^T h_i
  const Matrix quad = mapped.transpose() * mapped / mu;
  const Vector lin = h.piece_values(c_x);
  const int cap = 10 * h.num_pieces() * 1000;

  double gap = std::numeric_limits<double>::infinity();
  auto gap_of = [&](const Vector& l) {
    const Vector d = -(mapped * l) / mu;
    const double primal = (lin + mapped.transpose() * d).maxCoeff() + 0.5 * mu * d.squaredNorm();
    const double dual = lin.dot(l) - 0.5 * l.dot(quad * l);
    return std::max(0.0, primal - dual);
  };
  auto done = [&](const Vector& l) {
    gap = gap_of(l);
    return gap <= tol_gap * (1.0 + std::abs(lin.dot(l)));
  };
  const SimplexQpResult qp = simplex_qp(quad, lin, cap, done);
  gap = gap_of(qp.lambda);
  if (gap > tol_gap * (1.0 + std::abs(lin.dot(qp.lambda))))
    throw SubproblemTolFail("solve_polyhedral: duality gap " + fmt_g(gap) + " above tolerance after " +
                            std::to_string(qp.iterations) + " iterations");

  SubproblemResult r;
  r.weights = qp.lambda;
  r.v = slopes * qp.lambda;
  r.d = -(g.transpose() * r.v) / mu;
  r.gap = gap;
  r.iterations = qp.iterations;
  finish(r, h, c_x, g, mu);
  return r;
}

SubproblemResult solve_generic_convex(const Vector& c_x, const Matrix& g, const OuterFunction& h, double mu,
                                      double tol_gap) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_generic_convex: mu must be positive");
  if (!h.is_convex() || !h.has_closed_prox())
    throw std::invalid_argument("solve_generic_convex: h must be convex with a closed-form prox");
  require_dim(c_x, h.dim(), "solve_generic_convex c_x");
  if (g.rows() != h.dim()) throw DimensionError("solve_generic_convex: G must have m rows");

  const Eigen::Index n = g.cols();
  const double norm_g = spectral_norm_estimate(g);
  const double ratio = norm_g > 0.0 ? std::max(1.0, mu / norm_g) : 1.0;
  const double s_primal = norm_g > 0.0 ? 0.99 / (norm_g * std::sqrt(ratio)) : 1.0;
  const double s_dual = norm_g > 0.0 ? 0.99 * std::sqrt(ratio) / norm_g : 1.0;

  Vector d = Vector::Zero(n);
  Vector d_bar = d;
  Vector v = Vector::Zero(h.dim());
  Vector z = c_x;
  const double scale = 1.0 + c_x.norm();
  constexpr int kMaxIters = 50000;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale * std::max(1.0, norm_g);

  SubproblemResult r;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= kMaxIters; ++it) {
    // Dual step: prox of s H* via Moreau, H(u) = h(c_x + u). The prox point
    // z certifies v in dh(z).
    const Vector q = v + s_dual * (g * d_bar);
    z = h.prox(c_x + q / s_dual, s_dual);
    const Vector v_next = q - s_dual * (z - c_x);

    const Vector d_next = (d - s_primal * (g.transpose() * v_next)) / (1.0 + s_primal * mu);

    d_bar = 2.0 * d_next - d;
    d = d_next;
    v = v_next;

    residual = (mu * d + g.transpose() * v).norm() + (z - c_x - g * d).norm();
    // The error this residual induces in h(c_x + G d) must stay below the
    // predicted decrease, which is of order mu |d|^2.
    const double model_tol = 1e-2 * mu * mu * d.squaredNorm() / ((1.0 + v.norm()) * std::max(norm_g, 1e-300));
    if (residual <= tol_gap * scale && (residual <= model_tol || residual <= floor)) break;
  }
  it = std::min(it, kMaxIters);
  if (residual > tol_gap * scale)
    throw SubproblemTolFail("solve_generic_convex: residual " + fmt_g(residual) +
                            " above tolerance after " + std::to_string(kMaxIters) + " iterations");

  r.v = v;
  r.d = -(g.transpose() * v) / mu;
  r.gap = residual;
  r.iterations = it;
  finish(r, h, c_x, g, mu);
  return r;
}

std::vector<SubproblemResult> solve_scalar_piecewise(double c_x, double g, const ScalarPiecewise& h, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_scalar_piecewise: mu must be positive");
  const double h0 = h.value(c_x);
  std::vector<SubproblemResult> out;
  for (const ScalarLocalMin& m : h.local_minimizers(c_x, g, mu)) {
    SubproblemResult r;
    r.d = Vector::Constant(1, m.d);
    r.v = Vector::Constant(1, m.multiplier);
    r.z = Vector::Constant(1, c_x + g * m.d);
    r.lin_value = ExtReal(m.lin_value);
    r.model_value = m.value;
    r.descent = m.value < h0;
    out.push_back(std::move(r));
  }
  return out;
}

SubproblemResult solve_subproblem(const ProblemInstance& p, const Vector& x, const Vector& c_x, const Matrix& jac,
                                  double mu, const SolveConfig& cfg) {
  const OuterFunction& h = *p.outer;
  if (p.structure == InnerStructure::Regularized) {
    if (const auto* reg = dynamic_cast<const RegularizedComposite*>(&h)) {
      return solve_regularized(c_x(0), jac.row(0).transpose(), x, *reg, mu, cfg.prox_policy);
    }
  }
  if (const auto* poly = dynamic_cast<const PolyhedralMax*>(&h)) {
    return solve_polyhedral(c_x, jac, *poly, mu, cfg.tol_gap);
  }
  if (const auto* pw = dynamic_cast<const ScalarPiecewise*>(&h); pw != nullptr && jac.cols() == 1) {
    std::vector<SubproblemResult> mins = solve_scalar_piecewise(c_x(0), jac(0, 0), *pw, mu);
    if (mins.empty()) throw SolverError("solve_subproblem: no local minimizer of the scalar model");
    auto chosen = mins.begin();
    if (cfg.prox_policy == ProxPolicy::NearestLocal) {
      chosen = std::min_element(mins.begin(), mins.end(), [](const SubproblemResult& a, const SubproblemResult& b) {
        return a.d.norm() < b.d.norm();
      });
    }
    return *chosen;
  }
  if (h.is_convex() && h.has_closed_prox()) {
    return solve_generic_convex(c_x, jac, h, mu, cfg.tol_gap);
  }
  throw std::invalid_argument("solve_subproblem: no solver for outer function '" + h.name() + "'");
}

SubproblemResult solve_subproblem(const ProblemInstance& p, const Vector& x, double mu, const SolveConfig& cfg) {
  require_dim(x, p.n(), "solve_subproblem x");
  return solve_subproblem(p, x, p.map.value(x), p.map.jacobian(x), mu, cfg);
}

}  // namespace proxdescent
