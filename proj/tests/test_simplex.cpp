#include <doctest.h>

#include <random>

#include "proxdescent/simplex.hpp"
#include "support.hpp"

using namespace proxdescent;

TEST_CASE("simplex projection agrees with bisection") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 9;
    const Vector y = testsupport::random_vector(rng, k, 2.0);
    const Vector p = project_simplex(y);
    CHECK((p - testsupport::simplex_projection_bisect(y)).norm() <= 1e-10);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(p.minCoeff() >= 0.0);
  }
  CHECK_THROWS_AS(project_simplex(Vector()), DimensionError);
}

TEST_CASE("simplex qp meets the KKT conditions") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 6;
    const Matrix m = testsupport::random_matrix(rng, 3, k);
    const Matrix q = m.transpose() * m;
    const Vector lin = testsupport::random_vector(rng, k);
    const SimplexQpResult r = simplex_qp(q, lin, 100000, nullptr);
    REQUIRE(r.converged);
    const Vector grad = q * r.lambda - lin;
    // On the support the gradient is constant and minimal over all entries.
    const double floor = grad.minCoeff();
    for (int i = 0; i < k; ++i) {
      if (r.lambda(i) > 1e-9) CHECK(grad(i) <= floor + 1e-8);
    }
    CHECK(r.lambda.sum() == doctest::Approx(1.0));
    CHECK(r.lambda.minCoeff() >= 0.0);

    // No vertex or random simplex point does better.
    const double val = 0.5 * r.lambda.dot(q * r.lambda) - lin.dot(r.lambda);
    for (int s = 0; s < 20; ++s) {
      const Vector p = testsupport::simplex_projection_bisect(testsupport::random_vector(rng, k));
      CHECK(val <= 0.5 * p.dot(q * p) - lin.dot(p) + 1e-10);
    }
  }
}

TEST_CASE("simplex qp stops on the caller's certificate") {
  Matrix q = Matrix::Identity(3, 3);
  const Vector lin = (Vector(3) << 1.0, 0.0, 0.0).finished();
  int calls = 0;
  const SimplexQpResult r = simplex_qp(q, lin, 1000, [&](const Vector&) { return ++calls >= 1; });
  CHECK(r.converged);
  CHECK(calls >= 1);
}

TEST_CASE("distance to convex hull") {
  Matrix pts(2, 3);
  pts << 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0;
  CHECK(distance_to_hull(pts, (Vector(2) << 0.2, 0.2).finished()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(distance_to_hull(pts, (Vector(2) << 1.0, 1.0).finished()) == doctest::Approx(std::sqrt(0.5)));
  CHECK(distance_to_hull(pts, (Vector(2) << -1.0, 0.5).finished()) == doctest::Approx(1.0));
}
