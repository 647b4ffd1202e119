#include <doctest.h>

#include <random>

#include "proxdescent/svd.hpp"
#include "support.hpp"

using namespace proxdescent;

namespace {

void check_against_eigen(const Matrix& a) {
  const SvdResult r = jacobi_svd(a);
  const Eigen::Index k = std::min(a.rows(), a.cols());
  REQUIRE(r.s.size() == k);
  REQUIRE(r.u.rows() == a.rows());
  REQUIRE(r.u.cols() == k);
  REQUIRE(r.v.rows() == a.cols());
  REQUIRE(r.v.cols() == k);

  Eigen::JacobiSVD<Matrix> ref(a);
  const double scale = std::max(1.0, ref.singularValues()(0));
  CHECK((r.s - ref.singularValues()).norm() <= 1e-11 * scale);
  for (Eigen::Index i = 1; i < k; ++i) CHECK(r.s(i) <= r.s(i - 1));
  CHECK((r.u * r.s.asDiagonal() * r.v.transpose() - a).norm() <= 1e-11 * scale);
  // Columns paired with nonzero singular values are orthonormal.
  const Eigen::Index rank = (r.s.array() > 1e-10 * scale).count();
  CHECK((r.v.leftCols(rank).transpose() * r.v.leftCols(rank) - Matrix::Identity(rank, rank)).norm() <= 1e-10);
  CHECK((r.u.leftCols(rank).transpose() * r.u.leftCols(rank) - Matrix::Identity(rank, rank)).norm() <= 1e-10);
}

}  // namespace

TEST_CASE("jacobi svd agrees with Eigen on random shapes") {
  std::mt19937_64 rng(11);
  for (auto [r, c] : std::vector<std::pair<int, int>>{{1, 1}, {3, 3}, {5, 2}, {2, 5}, {10, 10}, {12, 7}}) {
    CAPTURE(r);
    CAPTURE(c);
    check_against_eigen(testsupport::random_matrix(rng, r, c));
  }
}

TEST_CASE("jacobi svd on rank-deficient and diagonal inputs") {
  std::mt19937_64 rng(12);
  const Matrix low = testsupport::random_matrix(rng, 8, 2) * testsupport::random_matrix(rng, 2, 6);
  check_against_eigen(low);
  const SvdResult lr = jacobi_svd(low);
  CHECK(lr.s(2) <= 1e-10 * lr.s(0));

  Matrix diag = Matrix::Zero(5, 5);
  diag.diagonal() << 0.5, -3.0, 2.0, 0.0, 1.0;
  const SvdResult d = jacobi_svd(diag);
  CHECK(d.s(0) == doctest::Approx(3.0));
  CHECK(d.s(1) == doctest::Approx(2.0));
  CHECK(d.s(2) == doctest::Approx(1.0));
  CHECK(d.s(3) == doctest::Approx(0.5));
  CHECK(d.s(4) == doctest::Approx(0.0));

  const SvdResult z = jacobi_svd(Matrix::Zero(3, 4));
  CHECK(z.s.isZero(0.0));
}

TEST_CASE("jacobi svd reports non-convergence") {
  std::mt19937_64 rng(13);
  JacobiOptions opts;
  opts.max_sweeps = 0;
  CHECK_THROWS_AS(jacobi_svd(testsupport::random_matrix(rng, 6, 6), opts), SolverError);
}
