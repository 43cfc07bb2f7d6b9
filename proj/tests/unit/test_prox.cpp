#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "s4n/diagnostics.hpp"
#include "s4n/prox.hpp"
#include "test_support.hpp"

using namespace s4n;

TEST(ProxL1, ClosedFormExample) {
  Vector u(2);
  u << 0.5, -0.1;
  const Vector p = prox_l1(u, 0.2);
  EXPECT_DOUBLE_EQ(p(0), 0.3);
  EXPECT_EQ(p(1), 0.0);
}

TEST(ProxL1, ZeroThresholdIsIdentity) {
  std::mt19937_64 rng(1);
  const Vector u = fixtures::random_vector(9, rng);
  EXPECT_EQ(prox_l1(u, 0.0), u);
}

TEST(ProxL1, MatchesBisectionOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector u = fixtures::random_vector(5, rng, 2.0);
    const double t = unif(rng);
    const Vector p = prox_l1(u, t);
    for (Index i = 0; i < u.size(); ++i) EXPECT_NEAR(p(i), fixtures::bisection_prox(u(i), t), 1e-8);
  }
}

TEST(ProxL1, VectorThresholdsMatchScalar) {
  std::mt19937_64 rng(3);
  const Vector u = fixtures::random_vector(7, rng);
  EXPECT_EQ(prox_l1(u, Vector::Constant(7, 0.3)), prox_l1(u, 0.3));
  EXPECT_THROW(prox_l1(u, -1.0), std::invalid_argument);
  EXPECT_THROW(prox_l1(u, Vector::Constant(3, 0.3)), std::invalid_argument);
}

TEST(Residual, NoRegularizationGivesScaledGradient) {
  std::mt19937_64 rng(4);
  const Vector x = fixtures::random_vector(6, rng);
  const Vector g = fixtures::random_vector(6, rng);
  EXPECT_LE((residual(x, g, ProxMetric(0.7), 0.0) - 0.7 * g).norm(), 1e-15);
}

TEST(Residual, VanishesAtAnalyticStationaryPoint) {
  const double mu = 0.1;
  const CompositeProblem p = fixtures::one_dim_quadratic(mu);
  Vector x(1);
  x << 1.0 - mu;
  for (double lam : {0.01, 1.0, 30.0}) {
    EXPECT_NEAR(residual(x, full_gradient(p, x), ProxMetric(lam), mu).norm(), 0.0, 1e-15);
  }
}

TEST(Residual, PartsAreConsistent) {
  std::mt19937_64 rng(5);
  const Vector x = fixtures::random_vector(8, rng);
  const Vector g = fixtures::random_vector(8, rng);
  const ResidualParts r = residual_parts(x, g, ProxMetric(0.5), 0.2);
  EXPECT_EQ(r.u, x - 0.5 * g);
  EXPECT_EQ(r.p, prox_l1(r.u, 0.1));
  EXPECT_EQ(r.F, x - r.p);
}

TEST(Residual, LipschitzWithTheoreticalModulus) {
  const CompositeProblem p(fixtures::small_dataset(80, 15, 0.4, 6), LossKind::Logistic, 0.05);
  const double L = lipschitz_upper_bound(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> loglam(-2.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lam = std::pow(10.0, loglam(rng));
    const double LF = residual_lipschitz_constant(1.0 / lam, 1.0 / lam, L);
    const Vector x = fixtures::random_vector(15, rng);
    const Vector y = x + fixtures::random_vector(15, rng, 0.3);
    const ProxMetric m(lam);
    const double lhs = (residual(x, full_gradient(p, x), m, p.reg_weight()) -
                        residual(y, full_gradient(p, y), m, p.reg_weight()))
                           .norm();
    EXPECT_LE(lhs, LF * (x - y).norm() * (1 + 1e-12));
  }
}

TEST(JacobianMask, TieIsInactive) {
  Vector u(3);
  u << 0.5, -0.1, 0.2;
  const JacobianMask m = jacobian_mask(u, 0.2);
  EXPECT_EQ(m.active, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(m.count(), 1);
  EXPECT_EQ(m.active_indices(), (IndexList{0}));
  EXPECT_EQ(m.inactive_indices(), (IndexList{1, 2}));
}

TEST(JacobianMask, ZeroThresholdAllActive) {
  Vector u(4);
  u << 1, -2, 3e-9, -1e-300;
  EXPECT_EQ(jacobian_mask(u, 0.0).count(), 4);
}

TEST(JacobianMask, MatchesProxDerivative) {
  std::mt19937_64 rng(8);
  const double t = 0.4;
  for (int trial = 0; trial < 200; ++trial) {
    const Vector u = fixtures::random_vector(10, rng);
    const JacobianMask m = jacobian_mask(u, t);
    for (Index i = 0; i < u.size(); ++i) {
      if (std::abs(std::abs(u(i)) - t) < 1e-4) continue;
      const double h = 1e-6;
      Vector up = u;
      Vector um = u;
      up(i) += h;
      um(i) -= h;
      const double d = (prox_l1(up, t)(i) - prox_l1(um, t)(i)) / (2 * h);
      EXPECT_NEAR(d, m.active[static_cast<std::size_t>(i)] ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(ScaledNorm, Basics) {
  std::mt19937_64 rng(9);
  const Vector v = fixtures::random_vector(5, rng);
  EXPECT_DOUBLE_EQ(scaled_norm(v, ProxMetric(1.0)), v.norm());
  EXPECT_EQ(scaled_norm(Vector::Zero(5), ProxMetric(3.0)), 0.0);
  for (double c : {-3.0, 0.5, 7.0}) {
    EXPECT_NEAR(scaled_norm(c * v, ProxMetric(0.2)), std::abs(c) * scaled_norm(v, ProxMetric(0.2)), 1e-12);
  }
  EXPECT_THROW(ProxMetric(0.0), std::invalid_argument);
}
