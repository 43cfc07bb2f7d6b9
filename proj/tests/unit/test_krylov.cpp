#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "s4n/krylov.hpp"
#include "test_support.hpp"

using namespace s4n;

namespace {

Eigen::MatrixXd random_spd(Index n, std::mt19937_64& rng, double shift = 1.0) {
  Eigen::MatrixXd B(n, n);
  std::normal_distribution<double> nd;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) B(i, j) = nd(rng);
  return B * B.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_symmetric_indefinite(Index n, std::mt19937_64& rng) {
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_spd(n, rng)).householderQ();
  Vector ev(n);
  for (Index i = 0; i < n; ++i) ev(i) = (i % 2 == 0 ? 1.0 : -1.0) * (0.5 + static_cast<double>(i));
  return Q * ev.asDiagonal() * Q.transpose();
}

}  // namespace

TEST(Krylov, IdentityConvergesInOneIteration) {
  std::mt19937_64 rng(1);
  const Vector b = fixtures::random_vector(10, rng);
  const MatrixOperator<Eigen::MatrixXd> I(Eigen::MatrixXd::Identity(10, 10));
  for (auto kind : {SolverKind::CG, SolverKind::MINRES}) {
    const KrylovResult r = krylov_solve(I, b, 1e-12, 50, kind);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_LE((r.solution - b).norm(), 1e-14);
    EXPECT_EQ(r.status, KrylovStatus::Converged);
  }
}

TEST(Krylov, ZeroRhsGivesZeroInZeroIterations) {
  const MatrixOperator<Eigen::MatrixXd> A(Eigen::MatrixXd::Identity(4, 4) * 3.0);
  for (auto kind : {SolverKind::CG, SolverKind::MINRES}) {
    const KrylovResult r = krylov_solve(A, Vector::Zero(4), 1e-8, 10, kind);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.solution.norm(), 0.0);
    EXPECT_EQ(r.status, KrylovStatus::Converged);
  }
}

TEST(Krylov, SpdMatchesDenseSolve) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd A = random_spd(20, rng);
    const Vector b = fixtures::random_vector(20, rng);
    const Vector exact = A.ldlt().solve(b);
    for (auto kind : {SolverKind::CG, SolverKind::MINRES}) {
      const KrylovResult r = krylov_solve(MatrixOperator<Eigen::MatrixXd>(A), b, 1e-10, 200, kind);
      EXPECT_LE((r.solution - exact).norm() / exact.norm(), 1e-8) << to_string(kind);
      EXPECT_LE((A * r.solution - b).norm() / b.norm(), 1e-9);
    }
  }
}

TEST(Krylov, MinresHandlesIndefinite) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd A = random_symmetric_indefinite(15, rng);
  const Vector b = fixtures::random_vector(15, rng);
  const KrylovResult r = minres(MatrixOperator<Eigen::MatrixXd>(A), b, 1e-12, 100);
  EXPECT_LE((A * r.solution - b).norm() / b.norm(), 1e-10);
  EXPECT_LE(std::abs(r.rel_residual - (A * r.solution - b).norm() / b.norm()), 1e-8);
}

TEST(Krylov, CgReportsNegativeCurvature) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = -1.0;
  A(1, 1) = 2.0;
  Vector b(2);
  b << 1.0, 0.0;
  const KrylovResult r = conjugate_gradient(MatrixOperator<Eigen::MatrixXd>(A), b, 1e-10, 10);
  EXPECT_EQ(r.status, KrylovStatus::Breakdown);
  EXPECT_TRUE(r.solution.allFinite());
}

TEST(Krylov, IterationCapIsRespected) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd A = random_spd(30, rng, 1e-3);
  const Vector b = fixtures::random_vector(30, rng);
  for (auto kind : {SolverKind::CG, SolverKind::MINRES}) {
    const KrylovResult r = krylov_solve(MatrixOperator<Eigen::MatrixXd>(A), b, 1e-14, 3, kind);
    EXPECT_EQ(r.iterations, 3);
    EXPECT_EQ(r.status, KrylovStatus::IterationLimit);
    EXPECT_LT(r.rel_residual, 1.0);
  }
}

TEST(Krylov, NonFiniteInputThrows) {
  const MatrixOperator<Eigen::MatrixXd> A(Eigen::MatrixXd::Identity(3, 3));
  Vector b = Vector::Ones(3);
  b(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(krylov_solve(A, b, 1e-8, 10, SolverKind::CG), std::runtime_error);
  EXPECT_THROW(krylov_solve(A, b, 1e-8, 10, SolverKind::MINRES), std::runtime_error);
}

TEST(Krylov, SolverNames) {
  EXPECT_EQ(parse_solver_kind("cg"), SolverKind::CG);
  EXPECT_EQ(parse_solver_kind("minres"), SolverKind::MINRES);
  EXPECT_THROW(parse_solver_kind("gmres"), std::invalid_argument);
}
