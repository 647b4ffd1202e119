#include "proxdescent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace proxdescent::oracle {

double grid_prox_1d(const std::function<double(double)>& h, double y, double w, double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0)) throw std::invalid_argument("grid_prox_1d: need lo < hi and step > 0");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step));
  double best_z = lo;
  double best_val = std::numeric_limits<double>::infinity();
  for (long long i = 0; i <= count; ++i) {
    const double z = lo + static_cast<double>(i) * step;
    const double val = h(z) + 0.5 * w * (z - y) * (z - y);
    if (val < best_val || (val == best_val && std::abs(z) < std::abs(best_z))) {
      best_val = val;
      best_z = z;
    }
  }
  return best_z;
}

namespace {

struct Model {
  const ProblemInstance& p;
  Vector c;
  Matrix jac;
  double mu;

  double operator()(const Vector& d) const {
    return p.outer->eval(c + jac * d).value() + 0.5 * mu * d.squaredNorm();
  }
};

/// Grid minimum of a unimodal function on [lo, hi]: a 400-interval scan,
/// then repeated 20-interval scans of the bracket around the best point
/// until the spacing reaches `step`. Ties go to the smallest |t|.
std::pair<double, double> zoom_scan(const std::function<double(double)>& f, double lo, double hi, double step) {
  double a = lo;
  double b = hi;
  int intervals = 400;
  double best_t = 0.0;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    const double h = (b - a) / intervals;
    for (int i = 0; i <= intervals; ++i) {
      const double t = a + i * h;
      const double v = f(t);
      if (v < best || (v == best && std::abs(t) < std::abs(best_t))) {
        best = v;
        best_t = t;
      }
    }
    if (h <= step) break;
    a = std::max(lo, best_t - h);
    b = std::min(hi, best_t + h);
    intervals = 20;
  }
  return {best_t, best};
}

}  // namespace

GridSubproblemResult grid_subproblem(const ProblemInstance& p, const Vector& x, double mu, double radius, double step) {
  if (p.n() > 2) throw std::invalid_argument("grid_subproblem: only n <= 2 is supported");
  if (!(radius > 0.0) || !(step > 0.0)) throw std::invalid_argument("grid_subproblem: radius and step must be positive");
  const Model model{p, p.map.value(x), p.map.jacobian(x), mu};
  GridSubproblemResult out;

  if (p.n() == 1) {
    const auto count = static_cast<long long>(std::llround(2.0 * radius / step));
    std::vector<double> vals(static_cast<std::size_t>(count + 1));
    double best = std::numeric_limits<double>::infinity();
    double best_d = 0.0;
    for (long long i = 0; i <= count; ++i) {
      const double d = -radius + static_cast<double>(i) * step;
      const double v = model(Vector::Constant(1, d));
      vals[static_cast<std::size_t>(i)] = v;
      if (v < best || (v == best && std::abs(d) < std::abs(best_d))) {
        best = v;
        best_d = d;
      }
    }
    out.argmin = Vector::Constant(1, best_d);
    out.value = best;
    std::vector<std::pair<double, double>> mins;
    for (long long i = 1; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (vals[u] < vals[u - 1] && vals[u] <= vals[u + 1]) mins.emplace_back(vals[u], -radius + static_cast<double>(i) * step);
    }
    std::sort(mins.begin(), mins.end());
    for (const auto& [v, d] : mins) {
      out.local_minimizers.push_back(Vector::Constant(1, d));
      out.local_values.push_back(v);
    }
    return out;
  }

  // Two dimensions: nested one-dimensional scans. The inner scan minimizes
  // over d_1 for fixed d_0; the outer scan minimizes the resulting profile.
  auto profile = [&](double d0) {
    return zoom_scan(
        [&](double d1) {
          Vector d(2);
          d << d0, d1;
          return model(d);
        },
        -radius, radius, step * 1e-2);
  };
  const auto outer = zoom_scan([&](double d0) { return profile(d0).second; }, -radius, radius, step);
  Vector center(2);
  center << outer.first, profile(outer.first).first;
  const double best = outer.second;
  out.argmin = center;
  out.value = best;
  return out;
}

Matrix fd_jacobian(const SmoothMap& map, const Vector& x, double h_step) {
  if (!(h_step > 0.0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  require_dim(x, map.dim_in, "fd_jacobian x");
  Matrix jac(map.dim_out, map.dim_in);
  for (int j = 0; j < map.dim_in; ++j) {
    const double h = h_step * std::max(1.0, std::abs(x(j)));
    Vector xp = x;
    Vector xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (map.value(xp) - map.value(xm)) / (xp(j) - xm(j));
  }
  return jac;
}

double jacobian_relative_error(const SmoothMap& map, const Vector& x, double h_step) {
  const Matrix exact = map.jacobian(x);
  const Matrix approx = fd_jacobian(map, x, h_step);
  return (exact - approx).norm() / std::max(1.0, exact.norm());
}

}  // namespace proxdescent::oracle
