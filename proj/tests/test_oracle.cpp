#include <doctest.h>

#include <cmath>

#include "proxdescent/oracle.hpp"
#include "proxdescent/outer.hpp"
#include "support.hpp"

using namespace proxdescent;

TEST_CASE("grid prox recovers closed forms") {
  auto abs = [](double z) { return std::abs(z); };
  for (double y : {-2.0, -0.4, 0.0, 0.7, 3.0}) {
    const double z = oracle::grid_prox_1d(abs, y, 1.0, -5.0, 5.0, 1e-4);
    CHECK(std::abs(z - testsupport::shrink_formula(y, 1.0)) <= 1e-4);
  }
  // Flat minimum: ties go to the smallest magnitude.
  auto flat = [](double) { return 0.0; };
  CHECK(std::abs(oracle::grid_prox_1d(flat, 0.0, 1.0, -1.0, 1.0, 0.1)) <= 1e-12);
}

TEST_CASE("finite-difference jacobian of a polynomial map") {
  SmoothMap map;
  map.dim_in = 2;
  map.dim_out = 2;
  map.value = [](const Vector& x) {
    return (Vector(2) << x(0) * x(0) * x(1), std::sin(x(0)) + x(1) * x(1) * x(1)).finished();
  };
  map.jacobian = [](const Vector& x) {
    Matrix j(2, 2);
    j << 2.0 * x(0) * x(1), x(0) * x(0), std::cos(x(0)), 3.0 * x(1) * x(1);
    return j;
  };
  const Vector x = (Vector(2) << 0.7, -1.3).finished();
  CHECK((oracle::fd_jacobian(map, x) - map.jacobian(x)).norm() <= 1e-8);
  CHECK(oracle::jacobian_relative_error(map, x) <= 1e-8);

  SmoothMap wrong = map;
  wrong.jacobian = [](const Vector&) { return Matrix::Identity(2, 2); };
  CHECK(oracle::jacobian_relative_error(wrong, x) > 0.1);
}

TEST_CASE("grid subproblem on a one-dimensional l1 model") {
  // h(c) = |c| with c(x) = x: min |x + d| + (mu/2) d^2 is solved by shrinking.
  ProblemInstance p;
  p.map.dim_in = 1;
  p.map.dim_out = 1;
  p.map.value = [](const Vector& x) { return x; };
  p.map.jacobian = [](const Vector&) { return Matrix::Identity(1, 1); };
  p.outer = std::make_shared<RegularizerOuter>(std::make_shared<L1Norm>(1), 1.0);
  for (double x : {-2.0, 0.3, 1.5}) {
    const double mu = 2.0;
    const auto r = oracle::grid_subproblem(p, Vector::Constant(1, x), mu, 5.0, 1e-5);
    const double expected = testsupport::shrink_formula(x, 1.0 / mu) - x;
    CHECK(std::abs(r.argmin(0) - expected) <= 2e-5);
    CHECK(r.value == doctest::Approx(std::abs(x + expected) + 0.5 * mu * expected * expected).epsilon(1e-6));
  }
}

TEST_CASE("grid subproblem in two dimensions") {
  // h = |.|_1 on R^2 with c(x) = A x; compare with a fine 2-D scan in the test.
  Matrix a(2, 2);
  a << 1.0, 0.5, -0.3, 2.0;
  ProblemInstance p;
  p.map.dim_in = 2;
  p.map.dim_out = 2;
  p.map.value = [a](const Vector& x) { return Vector(a * x); };
  p.map.jacobian = [a](const Vector&) { return a; };
  p.outer = std::make_shared<RegularizerOuter>(std::make_shared<L1Norm>(2), 1.0);
  const Vector x = (Vector(2) << 0.4, -0.2).finished();
  const double mu = 3.0;
  const auto r = oracle::grid_subproblem(p, x, mu, 2.0, 1e-5);

  auto model = [&](double d0, double d1) {
    const Vector d = (Vector(2) << d0, d1).finished();
    return (a * (x + d)).lpNorm<1>() + 0.5 * mu * d.squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (double d0 = -1.0; d0 <= 1.0; d0 += 2e-3)
    for (double d1 = -1.0; d1 <= 1.0; d1 += 2e-3) best = std::min(best, model(d0, d1));
  CHECK(r.value <= best + 1e-9);
  CHECK(r.value == doctest::Approx(model(r.argmin(0), r.argmin(1))));
}
