#include <cmath>
#include <memory>

#include "proxdescent/outer.hpp"
#include "proxdescent/problems.hpp"

namespace proxdescent {

namespace {

void expect_size(const Vector& v, Eigen::Index n, const std::string& field) {
  if (v.size() != n)
    throw InstanceError("field '" + field + "': expected length " + std::to_string(n) + ", got " +
                        std::to_string(v.size()));
}

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& field) {
  if (m.rows() != rows || m.cols() != cols)
    throw InstanceError("field '" + field + "': expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                        ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

int positive_int(double v, const std::string& field) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6)
    throw InstanceError("field '" + field + "': expected a positive integer");
  return static_cast<int>(v);
}

using Increment = std::function<double(const Vector& x, const Vector& s)>;

/// Inner map (f(x), x) for f with gradient g and, optionally, an accurate
/// f(x + s) - f(x).
SmoothMap value_and_identity(int n, std::function<double(const Vector&)> f, std::function<Vector(const Vector&)> g,
                             Increment df = nullptr) {
  SmoothMap map;
  map.dim_in = n;
  map.dim_out = n + 1;
  map.value = [n, f](const Vector& x) {
    require_dim(x, n, "x");
    Vector c(n + 1);
    c(0) = f(x);
    c.tail(n) = x;
    return c;
  };
  map.jacobian = [n, g](const Vector& x) {
    require_dim(x, n, "x");
    Matrix jac = Matrix::Zero(n + 1, n);
    jac.row(0) = g(x).transpose();
    jac.bottomRows(n).setIdentity();
    return jac;
  };
  if (df) {
    map.increment = [n, df](const Vector& x, const Vector& s) {
      require_dim(x, n, "x");
      require_dim(s, n, "s");
      Vector dc(n + 1);
      dc(0) = df(x, s);
      dc.tail(n) = s;
      return dc;
    };
  }
  return map;
}

SmoothMap least_squares_map(const Matrix& a, const Vector& b) {
  return value_and_identity(
      static_cast<int>(a.cols()), [a, b](const Vector& x) { return 0.5 * (a * x - b).squaredNorm(); },
      [a, b](const Vector& x) -> Vector { return a.transpose() * (a * x - b); },
      [a, b](const Vector& x, const Vector& s) {
        const Vector as = a * s;
        return (a * x - b).dot(as) + 0.5 * as.squaredNorm();
      });
}

void common_fields(const InstanceFile& f, ProblemInstance& p) {
  p.name = f.name;
  p.family = to_string(f.family);
  p.x0 = f.vector("x0");
  expect_size(p.x0, p.map.dim_in, "x0");
  if (f.has_vector("known_solution")) {
    p.known_solution = f.vector("known_solution");
    expect_size(*p.known_solution, p.map.dim_in, "known_solution");
  }
}

void least_squares_data(const InstanceFile& f, Matrix& a, Vector& b) {
  a = f.matrix("A");
  b = f.vector("b");
  expect_size(b, a.rows(), "b");
}

ProblemInstance build_least_squares_l1(const InstanceFile& f) {
  Matrix a;
  Vector b;
  least_squares_data(f, a, b);
  const int n = static_cast<int>(a.cols());
  ProblemInstance p;
  p.map = least_squares_map(a, b);
  p.outer = std::make_shared<RegularizedComposite>(std::make_shared<L1Norm>(n), f.scalar("reg_weight"));
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

double log1p_exp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

ProblemInstance build_logistic_l1(const InstanceFile& f) {
  const Matrix a = f.matrix("A");
  const Vector y = f.vector("labels");
  expect_size(y, a.rows(), "labels");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) != 1.0 && y(i) != -1.0) throw InstanceError("field 'labels': entries must be +1 or -1");
  const int n = static_cast<int>(a.cols());
  // f(x) = sum_i log(1 + exp(-y_i a_i.x)),
  // grad f(x) = -sum_i y_i a_i / (1 + exp(y_i a_i.x)).
  auto fval = [a, y](const Vector& x) {
    const Vector t = -(y.array() * (a * x).array()).matrix();
    double s = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) s += log1p_exp(t(i));
    return s;
  };
  auto grad = [a, y](const Vector& x) -> Vector {
    const Vector t = y.array() * (a * x).array();
    Vector w(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) w(i) = -y(i) / (1.0 + std::exp(t(i)));
    return a.transpose() * w;
  };
  // log(1 + e^(t + dt)) - log(1 + e^t) = log1p(e^t / (1 + e^t) * expm1(dt)).
  auto finc = [a, y](const Vector& x, const Vector& s) {
    const Vector t = -(y.array() * (a * x).array()).matrix();
    const Vector dt = -(y.array() * (a * s).array()).matrix();
    double total = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double logistic = 1.0 / (1.0 + std::exp(-t(i)));
      total += std::log1p(logistic * std::expm1(dt(i)));
    }
    return total;
  };
  ProblemInstance p;
  p.map = value_and_identity(n, fval, grad, finc);
  p.outer = std::make_shared<RegularizedComposite>(std::make_shared<L1Norm>(n), f.scalar("reg_weight"));
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

std::vector<std::vector<int>> contiguous_groups(const std::vector<int>& sizes, int n) {
  std::vector<std::vector<int>> groups;
  int next = 0;
  for (int s : sizes) {
    if (s <= 0) throw InstanceError("field 'group_sizes': sizes must be positive");
    std::vector<int> g;
    for (int i = 0; i < s; ++i) g.push_back(next++);
    groups.push_back(std::move(g));
  }
  if (next != n)
    throw InstanceError("field 'group_sizes': sizes sum to " + std::to_string(next) + ", expected " +
                        std::to_string(n));
  return groups;
}

ProblemInstance build_group_sparse(const InstanceFile& f) {
  Matrix a;
  Vector b;
  least_squares_data(f, a, b);
  const int n = static_cast<int>(a.cols());
  ProblemInstance p;
  p.map = least_squares_map(a, b);
  p.outer = std::make_shared<RegularizedComposite>(
      std::make_shared<GroupL2Norm>(contiguous_groups(f.int_list("group_sizes"), n)), f.scalar("reg_weight"));
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

ProblemInstance build_l1_penalty_nlp(const InstanceFile& f) {
  const Vector target = f.vector("target");
  const double radius = f.scalar("radius");
  const Matrix q = f.matrix("Q");
  const Vector s = f.vector("s");
  const int n = static_cast<int>(target.size());
  if (q.cols() != n) expect_shape(q, q.rows(), n, "Q");
  expect_size(s, q.rows(), "s");
  const int n_ineq = static_cast<int>(q.rows());
  const int m = 2 + n_ineq + n;

  ProblemInstance p;
  p.map.dim_in = n;
  p.map.dim_out = m;
  // c(x) = (f(x), |x|^2 - radius^2, Qx - s, x) with f(x) = |x - target|^2 / 2.
  p.map.value = [=](const Vector& x) {
    require_dim(x, n, "x");
    Vector c(m);
    c(0) = 0.5 * (x - target).squaredNorm();
    c(1) = x.squaredNorm() - radius * radius;
    c.segment(2, n_ineq) = q * x - s;
    c.tail(n) = x;
    return c;
  };
  p.map.jacobian = [=](const Vector& x) {
    require_dim(x, n, "x");
    Matrix jac = Matrix::Zero(m, n);
    jac.row(0) = (x - target).transpose();
    jac.row(1) = 2.0 * x.transpose();
    jac.middleRows(2, n_ineq) = q;
    jac.bottomRows(n).setIdentity();
    return jac;
  };
  p.map.increment = [=](const Vector& x, const Vector& step) {
    require_dim(x, n, "x");
    require_dim(step, n, "step");
    Vector dc(m);
    dc(0) = (x - target).dot(step) + 0.5 * step.squaredNorm();
    dc(1) = (2.0 * x + step).dot(step);
    dc.segment(2, n_ineq) = q * step;
    dc.tail(n) = step;
    return dc;
  };
  const double inf = std::numeric_limits<double>::infinity();
  p.outer = std::make_shared<L1PenaltyComposite>(1, n_ineq, f.scalar("nu"), Vector::Constant(n, -inf),
                                                 Vector::Constant(n, inf));
  common_fields(f, p);
  return p;
}

ProblemInstance build_polyhedral_minimax(const InstanceFile& f) {
  const Matrix slopes = f.matrix("slopes");
  const Vector offsets = f.vector("offsets");
  expect_size(offsets, slopes.cols(), "offsets");
  const Vector center = f.vector("center");
  const int n = static_cast<int>(center.size());
  const int m = static_cast<int>(slopes.rows());
  const Vector base = f.vector("base");
  expect_size(base, m, "base");
  const Matrix lin = f.matrix("linear");
  expect_shape(lin, m, n, "linear");
  const Vector curv = f.vector("curvature");
  expect_size(curv, m, "curvature");
  const Matrix wave = f.matrix("wave");
  expect_shape(wave, m, n, "wave");
  const double amp = f.scalar("wave_amplitude");

  ProblemInstance p;
  p.map.dim_in = n;
  p.map.dim_out = m;
  // c_i(x) = base_i + linear_i.u + curvature_i |u|^2 / 2 + amp sin(wave_i.u), u = x - center.
  p.map.value = [=](const Vector& x) {
    require_dim(x, n, "x");
    const Vector u = x - center;
    const Vector s = wave * u;
    Vector c = base + lin * u + 0.5 * u.squaredNorm() * curv;
    for (int i = 0; i < m; ++i) c(i) += amp * std::sin(s(i));
    return c;
  };
  p.map.jacobian = [=](const Vector& x) {
    require_dim(x, n, "x");
    const Vector u = x - center;
    const Vector s = wave * u;
    Matrix jac = lin + curv * u.transpose();
    for (int i = 0; i < m; ++i) jac.row(i) += amp * std::cos(s(i)) * wave.row(i);
    return jac;
  };
  p.outer = std::make_shared<PolyhedralMax>(slopes, offsets);
  common_fields(f, p);
  return p;
}

ProblemInstance build_matrix_completion(const InstanceFile& f) {
  const int rows = positive_int(f.scalar("rows"), "rows");
  const int cols = positive_int(f.scalar("cols"), "cols");
  const std::vector<int>& omega = f.int_list("omega");
  const Vector b = f.vector("b");
  expect_size(b, static_cast<Eigen::Index>(omega.size()), "b");
  const int n = rows * cols;
  for (int idx : omega)
    if (idx < 0 || idx >= n) throw InstanceError("field 'omega': index " + std::to_string(idx) + " out of range");

  // f(X) = |A(X) - b|^2 / 2 with A sampling the entries in omega (column-major);
  // grad f = A*(A(X) - b).
  auto residual = [omega, b](const Vector& x) {
    Vector r(b.size());
    for (std::size_t k = 0; k < omega.size(); ++k) r(static_cast<Eigen::Index>(k)) = x(omega[k]) - b(static_cast<Eigen::Index>(k));
    return r;
  };
  auto fval = [residual](const Vector& x) { return 0.5 * residual(x).squaredNorm(); };
  auto grad = [residual, omega, n](const Vector& x) -> Vector {
    const Vector r = residual(x);
    Vector g = Vector::Zero(n);
    for (std::size_t k = 0; k < omega.size(); ++k) g(omega[k]) += r(static_cast<Eigen::Index>(k));
    return g;
  };
  auto finc = [residual, omega](const Vector& x, const Vector& s) {
    const Vector r = residual(x);
    double total = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const double sk = s(omega[k]);
      total += (r(static_cast<Eigen::Index>(k)) + 0.5 * sk) * sk;
    }
    return total;
  };
  ProblemInstance p;
  p.map = value_and_identity(n, fval, grad, finc);
  p.outer = std::make_shared<RegularizedComposite>(std::make_shared<NuclearNorm>(rows, cols), f.scalar("reg_weight"));
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

ProblemInstance build_nonconvex_reg(const InstanceFile& f) {
  Matrix a;
  Vector b;
  least_squares_data(f, a, b);
  const int n = static_cast<int>(a.cols());
  const std::string& variant = f.text("variant");
  RegularizerPtr reg;
  if (variant == "mangasarian")
    reg = std::make_shared<MangasarianExp>(n, f.scalar("alpha"));
  else if (variant == "zhang")
    reg = std::make_shared<ZhangPhi>(n, f.scalar("lambda"), f.scalar("a"));
  else
    throw InstanceError("field 'variant': expected 'mangasarian' or 'zhang', got '" + variant + "'");
  ProblemInstance p;
  p.map = least_squares_map(a, b);
  p.outer = std::make_shared<RegularizedComposite>(reg, f.scalar("reg_weight"));
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

ProblemInstance build_box_composite(const InstanceFile& f) {
  const Vector target = f.vector("target");
  const int n = static_cast<int>(target.size());
  const Vector lower = f.vector("lower");
  const Vector upper = f.vector("upper");
  expect_size(lower, n, "lower");
  expect_size(upper, n, "upper");
  const double quartic = f.scalar("quartic");
  auto fval = [target, quartic](const Vector& x) {
    const Eigen::ArrayXd u = (x - target).array();
    return (0.5 * u.square() + quartic * u.square().square()).sum();
  };
  auto grad = [target, quartic](const Vector& x) -> Vector {
    const Eigen::ArrayXd u = (x - target).array();
    return (u + 4.0 * quartic * u.cube()).matrix();
  };
  auto finc = [target, quartic](const Vector& x, const Vector& s) {
    const Eigen::ArrayXd u = (x - target).array();
    const Eigen::ArrayXd ds = s.array();
    const Eigen::ArrayXd quart = ds * (4.0 * u.cube() + ds * (6.0 * u.square() + ds * (4.0 * u + ds)));
    return ((u + 0.5 * ds) * ds + quartic * quart).sum();
  };
  ProblemInstance p;
  p.map = value_and_identity(n, fval, grad, finc);
  p.outer = make_box_indicator_composite(lower, upper);
  p.structure = InnerStructure::Regularized;
  common_fields(f, p);
  return p;
}

SmoothMap scalar_cubic_map(double cubic) {
  SmoothMap map;
  map.dim_in = 1;
  map.dim_out = 1;
  map.value = [cubic](const Vector& x) {
    require_dim(x, 1, "x");
    return Vector::Constant(1, x(0) + cubic * x(0) * x(0) * x(0));
  };
  map.jacobian = [cubic](const Vector& x) {
    require_dim(x, 1, "x");
    return Matrix::Constant(1, 1, 1.0 + 3.0 * cubic * x(0) * x(0));
  };
  return map;
}

ProblemInstance build_jump_example(const InstanceFile& f) {
  ProblemInstance p;
  p.map = scalar_cubic_map(0.0);
  p.outer = make_jump_example();
  common_fields(f, p);
  return p;
}

ProblemInstance build_max_of_quadratics(const InstanceFile& f) {
  const Matrix coef = f.matrix("quadratics");
  if (coef.cols() != 3) expect_shape(coef, coef.rows(), 3, "quadratics");
  if (coef.rows() == 0) throw InstanceError("field 'quadratics': need at least one row");
  std::vector<QuadraticPiece> quads;
  for (Eigen::Index i = 0; i < coef.rows(); ++i) {
    if (coef(i, 0) < 0.0) throw InstanceError("field 'quadratics': leading coefficients must be nonnegative");
    QuadraticPiece q;
    q.a = coef(i, 0);
    q.b = coef(i, 1);
    q.e = coef(i, 2);
    quads.push_back(q);
  }
  ProblemInstance p;
  p.map = scalar_cubic_map(f.scalar("cubic"));
  p.outer = make_max_of_quadratics(quads);
  common_fields(f, p);
  return p;
}

}  // namespace

ProblemInstance build_problem(const InstanceFile& f) {
  try {
    switch (f.family) {
      case Family::LeastSquaresL1: return build_least_squares_l1(f);
      case Family::LogisticL1: return build_logistic_l1(f);
      case Family::GroupSparse: return build_group_sparse(f);
      case Family::L1PenaltyNLP: return build_l1_penalty_nlp(f);
      case Family::PolyhedralMinimax: return build_polyhedral_minimax(f);
      case Family::MatrixCompletion: return build_matrix_completion(f);
      case Family::NonconvexReg: return build_nonconvex_reg(f);
      case Family::BoxComposite: return build_box_composite(f);
      case Family::Sec62Counterexample: return build_jump_example(f);
      case Family::MaxOfQuadratics: return build_max_of_quadratics(f);
    }
  } catch (const InstanceError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InstanceError(f.name + ": " + e.what());
  }
  throw InstanceError("unknown family");
}

}  // namespace proxdescent
