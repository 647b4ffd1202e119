#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "proxdescent/core.hpp"
#include "proxdescent/outer.hpp"

using namespace proxdescent;

TEST_CASE("ExtReal rejects NaN and negative infinity") {
  CHECK_THROWS_AS(ExtReal(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(ExtReal(-std::numeric_limits<double>::infinity()), std::invalid_argument);
  const ExtReal inf(std::numeric_limits<double>::infinity());
  CHECK(inf.is_infinite());
  CHECK(inf == ExtReal::infinity());
}

TEST_CASE("ExtReal arithmetic and ordering") {
  const ExtReal a(1.5);
  const ExtReal b(2.0);
  CHECK((a + b).value() == doctest::Approx(3.5));
  CHECK((a + ExtReal::infinity()).is_infinite());
  CHECK(a < b);
  CHECK(b < ExtReal::infinity());
  CHECK_FALSE(ExtReal::infinity() < ExtReal::infinity());
  CHECK(ExtReal::infinity() <= ExtReal::infinity());
  CHECK(std::isinf(ExtReal::infinity().value()));

  std::ostringstream os;
  os << ExtReal::infinity() << ' ' << ExtReal(2.0);
  CHECK(os.str() == "+inf 2");
}

TEST_CASE("signature text form") {
  CHECK(ManifoldSignature{SignatureKind::SignPattern, {1, 0, -1}}.str() == "sign:+0-");
  CHECK(ManifoldSignature{SignatureKind::ActiveIndexSet, {0, 2}}.str() == "active:{0,2}");
  CHECK(ManifoldSignature{SignatureKind::Rank, {3}}.str() == "rank:3");
  CHECK(ManifoldSignature{SignatureKind::Trivial, {}}.str() == "trivial:");
  CHECK(ManifoldSignature{SignatureKind::Rank, {2}} == ManifoldSignature{SignatureKind::Rank, {2}});
  CHECK_FALSE(ManifoldSignature{SignatureKind::Rank, {2}} == ManifoldSignature{SignatureKind::SignPattern, {2}});
}

TEST_CASE("SolveConfig validation") {
  SolveConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("tau") {
    cfg.tau = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("sigma") {
    cfg.sigma = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("mu ordering") {
    cfg.mu0 = 1e-9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("mu_max") {
    cfg.mu_max = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("tol") {
    cfg.tol_crit = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}

TEST_CASE("require_dim names the argument") {
  try {
    require_dim(Vector::Zero(2), 3, "thing");
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("thing") != std::string::npos);
  }
}

TEST_CASE("map_increment falls back to the difference of values") {
  SmoothMap map;
  map.dim_in = 2;
  map.dim_out = 1;
  map.value = [](const Vector& x) { return Vector::Constant(1, x.squaredNorm()); };
  const Vector x = Vector::Constant(2, 1.0);
  const Vector s = Vector::Constant(2, 0.5);
  CHECK(map_increment(map, x, s)(0) == doctest::Approx(2.5));
  map.increment = [](const Vector& x, const Vector& s) { return Vector::Constant(1, (2.0 * x + s).dot(s)); };
  CHECK(map_increment(map, x, s)(0) == doctest::Approx(2.5));
}

TEST_CASE("composite and linearized evaluation") {
  ProblemInstance p;
  p.map.dim_in = 2;
  p.map.dim_out = 2;
  p.map.value = [](const Vector& x) { return Vector(x.array().square()); };
  p.map.jacobian = [](const Vector& x) { return Matrix(2.0 * x.asDiagonal()); };
  p.outer = std::make_shared<RegularizerOuter>(std::make_shared<L1Norm>(2), 1.0);

  const Vector x = (Vector(2) << 1.0, -2.0).finished();
  CHECK(composite_eval(p, x).value() == doctest::Approx(5.0));
  // c + J d = (1 + 2 d0, 4 - 4 d1) = (-1, -4)
  const Vector d = (Vector(2) << -1.0, 2.0).finished();
  CHECK(linearized_eval(p, x, d).value() == doctest::Approx(5.0));
  CHECK_THROWS_AS(composite_eval(p, Vector::Zero(3)), DimensionError);
}
