#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "proxdescent/outer.hpp"
#include "support.hpp"

using namespace proxdescent;
using testsupport::argmin_1d;

namespace {

// Scalar prox by direct minimization of r(z) + (w/2)(z - y)^2 with r
// evaluated through a one-dimensional instance of the regularizer.
double scalar_prox_reference(const Regularizer& r, double y, double w) {
  auto obj = [&](double z) {
    const ExtReal v = r.eval(Vector::Constant(1, z));
    return v.value() + 0.5 * w * (z - y) * (z - y);
  };
  const double span = std::abs(y) + 5.0;
  return argmin_1d(obj, -span, span);
}

}  // namespace

TEST_CASE("shrink matches the three-case formula") {
  std::mt19937_64 rng(1);
  const Vector y = testsupport::random_vector(rng, 500, 2.0);
  for (double alpha : {0.0, 0.1, 1.0, 3.0}) {
    const Vector z = shrink(y, alpha);
    for (Eigen::Index i = 0; i < y.size(); ++i) CHECK(z(i) == testsupport::shrink_formula(y(i), alpha));
  }
  CHECK(shrink(Vector::Constant(1, 1.0), 1.0)(0) == 0.0);
}

TEST_CASE("group_shrink scales each block toward zero") {
  const Vector y = (Vector(5) << 3.0, 4.0, 0.1, -0.1, 2.0).finished();
  const std::vector<std::vector<int>> groups = {{0, 1}, {2, 3}, {4}};
  const Vector z = group_shrink(y, groups, 1.0);
  CHECK(z(0) == doctest::Approx(3.0 * 0.8));
  CHECK(z(1) == doctest::Approx(4.0 * 0.8));
  CHECK(z(2) == 0.0);
  CHECK(z(3) == 0.0);
  CHECK(z(4) == doctest::Approx(1.0));
}

TEST_CASE("separable prox operators agree with direct scalar minimization") {
  std::mt19937_64 rng(2);
  const std::vector<std::shared_ptr<Regularizer>> regs = {
      std::make_shared<L1Norm>(1),
      std::make_shared<HuberSum>(1, 0.7),
      std::make_shared<SquaredL2>(1),
      std::make_shared<GroupL2Norm>(std::vector<std::vector<int>>{{0}}),
      std::make_shared<MangasarianExp>(1, 2.0),
      std::make_shared<ZhangPhi>(1, 0.5, 3.0),
      std::make_shared<BoxIndicator>(Vector::Constant(1, -0.5), Vector::Constant(1, 1.5)),
  };
  for (const auto& r : regs) {
    CAPTURE(r->name());
    for (int trial = 0; trial < 40; ++trial) {
      const double y = testsupport::uniform(rng, -3.0, 3.0);
      const double w = testsupport::uniform(rng, 0.3, 5.0);
      const double z = r->prox(Vector::Constant(1, y), w, ProxPolicy::GlobalCandidate)(0);
      const double ref = scalar_prox_reference(*r, y, w);
      auto obj = [&](double t) { return r->eval(Vector::Constant(1, t)).value() + 0.5 * w * (t - y) * (t - y); };
      CAPTURE(y);
      CAPTURE(w);
      // Objective values are compared so that ties between distant global
      // candidates do not register as failures.
      CHECK(obj(z) <= obj(ref) + 1e-9);
    }
  }
}

TEST_CASE("huber prox closed form") {
  const Vector y = (Vector(3) << 0.5, 4.0, -4.0).finished();
  const Vector z = huber_prox(y, 1.0, 1.0);
  CHECK(z(0) == doctest::Approx(0.25));
  CHECK(z(1) == doctest::Approx(3.0));
  CHECK(z(2) == doctest::Approx(-3.0));
  CHECK(huber_phi(0.5, 1.0) == doctest::Approx(0.125));
  CHECK(huber_phi(-3.0, 1.0) == doctest::Approx(2.5));
}

TEST_CASE("zhang penalty is linear, then concave, then flat") {
  const double lambda = 0.5;
  const double a = 3.0;
  CHECK(zhang_phi(0.25, lambda, a) == doctest::Approx(0.125));
  CHECK(zhang_phi(10.0, lambda, a) == doctest::Approx((a + 1.0) * lambda * lambda / 2.0));
  // Continuity at the breakpoints.
  CHECK(zhang_phi(lambda + 1e-12, lambda, a) == doctest::Approx(lambda * lambda));
  CHECK(zhang_phi(a * lambda - 1e-12, lambda, a) == doctest::Approx(zhang_phi(a * lambda + 1e-12, lambda, a)));
}

TEST_CASE("nonconvex prox policies") {
  // Two local minimizers of (1 - exp(-2|z|)) + (1/2)(z - 1)^2: one at zero
  // and one near y.
  const ScalarProx nearest = mangasarian_prox(1.0, 2.0, 1.0, ProxPolicy::NearestLocal);
  const ScalarProx global = mangasarian_prox(1.0, 2.0, 1.0, ProxPolicy::GlobalCandidate);
  auto obj = [](double z) { return 1.0 - std::exp(-2.0 * std::abs(z)) + 0.5 * (z - 1.0) * (z - 1.0); };
  CHECK(obj(global.z) <= obj(nearest.z) + 1e-12);
  CHECK(std::abs(nearest.z - 1.0) <= std::abs(global.z - 1.0) + 1e-12);
  CHECK(mangasarian_prox(0.0, 2.0, 1.0, ProxPolicy::GlobalCandidate).z == 0.0);
}

TEST_CASE("nuclear prox shrinks singular values") {
  std::mt19937_64 rng(3);
  const Matrix y = testsupport::random_matrix(rng, 5, 4);
  const Matrix z = nuclear_prox(y, 2.0, 1.0);
  Eigen::JacobiSVD<Matrix> ref(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = (ref.singularValues().array() - 0.5).max(0.0).matrix();
  const Matrix expected = ref.matrixU() * s.asDiagonal() * ref.matrixV().transpose();
  CHECK((z - expected).norm() <= 1e-10);

  const NuclearNorm nuc(5, 4);
  const Vector flat = Eigen::Map<const Vector>(y.data(), y.size());
  CHECK(nuc.eval(flat).value() == doctest::Approx(ref.singularValues().sum()).epsilon(1e-12));
  CHECK(nuc.signature(Eigen::Map<const Vector>(z.data(), z.size()), 1e-8).data.front() ==
        static_cast<int>((s.array() > 0.0).count()));
}

TEST_CASE("box indicator") {
  const BoxIndicator box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  CHECK(box.eval(Vector::Constant(2, 0.5)).value() == 0.0);
  CHECK(box.eval(Vector::Constant(2, 1.5)).is_infinite());
  const Vector y = (Vector(2) << 3.0, -0.25).finished();
  const Vector z = box.prox(y, 1.0, ProxPolicy::GlobalCandidate);
  CHECK(z(0) == 1.0);
  CHECK(z(1) == -0.25);
  CHECK(box.signature(z, 1e-9).data == std::vector<int>{1, 0});
  CHECK(box.subgrad_residual(z, (Vector(2) << 2.0, 0.0).finished(), 1e-9));
  CHECK_FALSE(box.subgrad_residual(z, (Vector(2) << -2.0, 0.0).finished(), 1e-9));
  CHECK_THROWS(BoxIndicator(Vector::Constant(2, 1.0), Vector::Constant(2, -1.0)));
}

TEST_CASE("l1 subdifferential and signature") {
  const L1Norm l1(3);
  const Vector x = (Vector(3) << 2.0, 0.0, -1.0).finished();
  CHECK(l1.subgrad_residual(x, (Vector(3) << 1.0, 0.3, -1.0).finished(), 1e-12));
  CHECK_FALSE(l1.subgrad_residual(x, (Vector(3) << 1.0, 1.3, -1.0).finished(), 1e-12));
  CHECK_FALSE(l1.subgrad_residual(x, (Vector(3) << 0.5, 0.0, -1.0).finished(), 1e-12));
  CHECK(l1.signature(x, 1e-9).str() == "sign:+0-");
}

TEST_CASE("increments agree with differences of values") {
  std::mt19937_64 rng(4);
  const std::vector<std::shared_ptr<Regularizer>> regs = {
      std::make_shared<L1Norm>(4),
      std::make_shared<SquaredL2>(4),
      std::make_shared<GroupL2Norm>(std::vector<std::vector<int>>{{0, 1}, {2, 3}}),
      std::make_shared<MangasarianExp>(4, 2.0),
      std::make_shared<ZhangPhi>(4, 0.5, 3.0),
      std::make_shared<HuberSum>(4, 0.7),
  };
  for (const auto& r : regs) {
    CAPTURE(r->name());
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = testsupport::random_vector(rng, 4);
      const Vector dx = testsupport::random_vector(rng, 4, 0.5);
      const double diff = r->eval(x + dx).value() - r->eval(x).value();
      CHECK(r->increment(x, dx) == doctest::Approx(diff).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("increments resolve changes below the value resolution") {
  // x away from every kink, dx tiny: the increment must match the first-order
  // change, which the difference of two values cannot resolve.
  const Vector x = (Vector(2) << 3.0, -2.0).finished();
  const Vector dx = (Vector(2) << 1e-14, 3e-15).finished();
  const L1Norm l1(2);
  CHECK(l1.increment(x, dx) == doctest::Approx(1e-14 - 3e-15).epsilon(1e-12));

  const MangasarianExp me(2, 0.5);
  const double expected = 0.5 * (std::exp(-1.5) * 1e-14 - std::exp(-1.0) * 3e-15);
  CHECK(me.increment(x, dx) == doctest::Approx(expected).epsilon(1e-6));

  // Middle region of the clipped-concave penalty: slope (a lambda - t)/(a - 1).
  const ZhangPhi zh(2, 1.0, 4.0);
  const double zexp = (4.0 - 3.0) / 3.0 * 1e-14 - (4.0 - 2.0) / 3.0 * 3e-15;
  CHECK(zh.increment(x, dx) == doctest::Approx(zexp).epsilon(1e-6));

  const GroupL2Norm grp(std::vector<std::vector<int>>{{0, 1}});
  const double gexp = x.normalized().dot(dx);
  CHECK(grp.increment(x, dx) == doctest::Approx(gexp).epsilon(1e-6));
}

TEST_CASE("regularized composite") {
  const RegularizedComposite h(std::make_shared<L1Norm>(2), 0.5);
  const Vector z = (Vector(3) << 1.0, 2.0, -4.0).finished();
  CHECK(h.eval(z).value() == doctest::Approx(1.0 + 0.5 * 6.0));
  CHECK(h.penalty(z.tail(2)).value() == doctest::Approx(3.0));
  const Vector p = h.penalty_prox(z.tail(2), 1.0, ProxPolicy::GlobalCandidate);
  CHECK(p(0) == doctest::Approx(1.5));
  CHECK(p(1) == doctest::Approx(-3.5));
  // A subgradient has first entry 1 and tail in reg_weight * d|x|.
  CHECK(h.subgrad_residual(z, (Vector(3) << 1.0, 0.5, -0.5).finished(), 1e-12));
  CHECK_FALSE(h.subgrad_residual(z, (Vector(3) << 0.0, 0.5, -0.5).finished(), 1e-12));
  const Vector dz = (Vector(3) << 1e-3, -2e-3, 1e-3).finished();
  CHECK(h.increment(z, dz) == doctest::Approx(h.eval(z + dz).value() - h.eval(z).value()));

  const auto box = make_box_indicator_composite(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  CHECK(box->eval((Vector(3) << 2.0, 0.0, 0.5).finished()).value() == 2.0);
  CHECK(box->eval((Vector(3) << 2.0, 0.0, 1.5).finished()).is_infinite());
  CHECK(std::isinf(box->increment((Vector(3) << 2.0, 0.0, 0.5).finished(), (Vector(3) << 0.0, 0.0, 1.0).finished())));
}

TEST_CASE("polyhedral max evaluation, prox and active set") {
  // h(z) = max(z, -z, 0.5) on the real line.
  Matrix slopes(1, 3);
  slopes << 1.0, -1.0, 0.0;
  const Vector offsets = (Vector(3) << 0.0, 0.0, 0.5).finished();
  const PolyhedralMax h(slopes, offsets);
  CHECK(h.eval(Vector::Constant(1, 2.0)).value() == 2.0);
  CHECK(h.eval(Vector::Constant(1, 0.1)).value() == 0.5);
  CHECK(h.active_set(Vector::Constant(1, 0.5), 1e-9) == std::vector<int>{0, 2});
  CHECK(h.signature(Vector::Constant(1, -0.5), 1e-9).str() == "active:{1,2}");

  for (double y : {-3.0, -0.7, 0.2, 0.6, 2.5}) {
    for (double w : {0.5, 2.0}) {
      const double z = h.prox(Vector::Constant(1, y), w, ProxPolicy::GlobalCandidate)(0);
      auto obj = [&](double t) { return std::max({t, -t, 0.5}) + 0.5 * w * (t - y) * (t - y); };
      CHECK(obj(z) <= obj(argmin_1d(obj, -10.0, 10.0)) + 1e-9);
    }
  }
  // Subgradients at a kink are convex combinations of the active slopes.
  CHECK(h.subgrad_residual(Vector::Constant(1, 0.5), Vector::Constant(1, 0.3), 1e-9));
  CHECK_FALSE(h.subgrad_residual(Vector::Constant(1, 0.5), Vector::Constant(1, -0.3), 1e-9));
}

TEST_CASE("l1 penalty outer function") {
  const double inf = std::numeric_limits<double>::infinity();
  const L1PenaltyComposite h(1, 1, 2.0, Vector::Constant(1, -inf), Vector::Constant(1, 1.0));
  // z = (f, g_eq, g_ineq, x)
  const Vector z = (Vector(4) << 1.0, -0.5, 0.25, 0.0).finished();
  CHECK(h.eval(z).value() == doctest::Approx(1.0 + 2.0 * 0.5 + 2.0 * 0.25));
  CHECK(h.eval((Vector(4) << 1.0, 0.0, -3.0, 2.0).finished()).is_infinite());
  CHECK(h.eval((Vector(4) << 1.0, 0.0, -3.0, 0.0).finished()).value() == 1.0);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = testsupport::random_vector(rng, 4, 2.0);
    const double w = testsupport::uniform(rng, 0.5, 3.0);
    const Vector p = h.prox(y, w, ProxPolicy::GlobalCandidate);
    auto part = [&](int i, const std::function<double(double)>& f) {
      auto obj = [&](double t) { return f(t) + 0.5 * w * (t - y(i)) * (t - y(i)); };
      return argmin_1d(obj, -20.0, 20.0);
    };
    CHECK(p(0) == doctest::Approx(part(0, [](double t) { return t; })).epsilon(1e-7));
    CHECK(p(1) == doctest::Approx(part(1, [](double t) { return 2.0 * std::abs(t); })).epsilon(1e-7));
    CHECK(p(2) == doctest::Approx(part(2, [](double t) { return 2.0 * std::max(0.0, t); })).epsilon(1e-7));
    CHECK(p(3) == doctest::Approx(std::min(y(3), 1.0)));
  }
  const Vector dz = (Vector(4) << 1e-3, 1e-3, -1e-3, 0.0).finished();
  CHECK(h.increment(z, dz) == doctest::Approx(h.eval(z + dz).value() - h.eval(z).value()));
}

TEST_CASE("jump example and maximum of quadratics") {
  const auto jump = make_jump_example();
  CHECK(jump->value(-2.0) == 2.0);
  CHECK(jump->value(0.0) == 0.0);
  CHECK(jump->value(0.5) == 1.5);
  CHECK_FALSE(jump->is_convex());

  const auto mq = make_max_of_quadratics({{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                                           false, false, 1.0, -2.0, 1.0},
                                          {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                                           false, false, 1.0, 2.0, 1.0}});
  for (double c : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    CHECK(mq->value(c) == doctest::Approx(std::max((c - 1.0) * (c - 1.0), (c + 1.0) * (c + 1.0))));
  }
  CHECK(mq->subgrad_residual(Vector::Constant(1, 0.0), Vector::Constant(1, 1.0), 1e-9));
  CHECK_FALSE(mq->subgrad_residual(Vector::Constant(1, 0.0), Vector::Constant(1, 3.0), 1e-9));
}
