#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "s4n/oracles.hpp"
#include "test_support.hpp"

using namespace s4n;

namespace {

CompositeProblem small_problem(LossKind loss = LossKind::Logistic) {
  return CompositeProblem(fixtures::small_dataset(60, 12, 0.4, 21), loss, 0.01);
}

OracleConfig fixed_batch(Index g, Index h, std::uint64_t seed = 1) {
  OracleConfig c;
  c.grad_size0 = c.grad_cap = g;
  c.hess_size0 = c.hess_cap = h;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Sampling, FullSizeIsPermutationOfAllIndices) {
  std::mt19937_64 rng(1);
  const IndexList s = sample_without_replacement(17, 17, rng);
  std::set<Index> set(s.begin(), s.end());
  EXPECT_EQ(set.size(), 17u);
  EXPECT_EQ(*set.begin(), 0);
  EXPECT_EQ(*set.rbegin(), 16);
}

TEST(Sampling, DistinctSortedAndDeterministic) {
  IndexSampler a(50, 9);
  IndexSampler b(50, 9);
  for (int i = 0; i < 20; ++i) {
    const IndexList x = a.draw(7);
    EXPECT_EQ(x, b.draw(7));
    EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
    EXPECT_EQ(std::set<Index>(x.begin(), x.end()).size(), 7u);
  }
  EXPECT_THROW(a.draw(0), std::invalid_argument);
  EXPECT_THROW(a.draw(51), std::invalid_argument);
}

TEST(Sampling, InclusionFrequencyWithinThreeSigma) {
  const Index N = 20;
  const Index m = 5;
  const int draws = 100000;
  std::mt19937_64 rng(3);
  std::vector<int> hits(N, 0);
  for (int d = 0; d < draws; ++d) {
    for (Index i : sample_without_replacement(N, m, rng)) ++hits[static_cast<std::size_t>(i)];
  }
  const double p = static_cast<double>(m) / static_cast<double>(N);
  const double sigma = std::sqrt(p * (1 - p) / draws);
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, p, 3 * sigma);
}

TEST(StochasticGradient, FullBatchEqualsFullGradient) {
  const CompositeProblem p = small_problem();
  OracleState st(fixed_batch(p.n_points(), 1), p.n_points());
  std::mt19937_64 rng(2);
  const Vector x = fixtures::random_vector(12, rng);
  EXPECT_EQ(stochastic_gradient(p, st, x, 0), full_gradient(p, x));
  EXPECT_EQ(st.grad_evals, p.n_points());
}

TEST(StochasticGradient, VarianceReducedIsExactAtAnchor) {
  const CompositeProblem p = small_problem();
  OracleConfig c = fixed_batch(4, 1);
  c.vr_enabled = true;
  c.vr_period = 3;
  OracleState st(c, p.n_points());
  std::mt19937_64 rng(4);
  const Vector x = fixtures::random_vector(12, rng);
  EXPECT_LE((stochastic_gradient(p, st, x, 0) - full_gradient(p, x)).norm(), 1e-15);
  EXPECT_EQ(st.grad_evals, p.n_points() + 8);
  EXPECT_LE((stochastic_gradient(p, st, x, 1) - full_gradient(p, x)).norm(), 1e-15);
  EXPECT_EQ(st.grad_evals, p.n_points() + 16);
  stochastic_gradient(p, st, x, 3);
  EXPECT_EQ(st.grad_evals, 2 * p.n_points() + 24);
}

TEST(StochasticGradient, UnbiasedInBothModes) {
  for (bool vr : {false, true}) {
    const CompositeProblem p = small_problem();
    OracleConfig c = fixed_batch(5, 1, 77);
    c.vr_enabled = vr;
    c.vr_period = 1000000;
    OracleState st(c, p.n_points());
    std::mt19937_64 rng(5);
    const Vector anchor = fixtures::random_vector(12, rng);
    const Vector x = anchor + fixtures::random_vector(12, rng, 0.5);
    if (vr) stochastic_gradient(p, st, anchor, 0);
    const int draws = 10000;
    Vector sum = Vector::Zero(12);
    Vector sum2 = Vector::Zero(12);
    for (int d = 0; d < draws; ++d) {
      const Vector g = stochastic_gradient(p, st, x, 1);
      sum += g;
      sum2 += g.cwiseProduct(g);
    }
    const Vector mean = sum / draws;
    const Vector var = sum2 / draws - mean.cwiseProduct(mean);
    const Vector truth = full_gradient(p, x);
    for (Index i = 0; i < 12; ++i) {
      const double sigma = std::sqrt(std::max(var(i), 0.0) / draws);
      EXPECT_LE(std::abs(mean(i) - truth(i)), 3 * sigma + 1e-15) << "vr=" << vr << " i=" << i;
    }
  }
}

TEST(HessOperator, FullBatchMatchesDenseHessian) {
  for (auto loss : {LossKind::Logistic, LossKind::Sigmoid}) {
    const CompositeProblem p = small_problem(loss);
    OracleState st(fixed_batch(1, p.n_points()), p.n_points());
    std::mt19937_64 rng(6);
    const Vector x = fixtures::random_vector(12, rng);
    const SubsampledHessian H = stochastic_hess_operator(p, st, x);
    const Eigen::MatrixXd dense = fixtures::dense_hessian(p, x, {p.all_indices().begin(), p.all_indices().end()});
    for (int t = 0; t < 5; ++t) {
      const Vector v = fixtures::random_vector(12, rng);
      EXPECT_LE(fixtures::rel_diff(H * v, dense * v), 1e-12);
    }
    EXPECT_EQ((H * Vector::Zero(12)).norm(), 0.0);
  }
}

TEST(HessOperator, SymmetricAndCharged) {
  const CompositeProblem p = small_problem(LossKind::Sigmoid);
  OracleState st(fixed_batch(1, 9), p.n_points());
  std::mt19937_64 rng(7);
  const SubsampledHessian H = stochastic_hess_operator(p, st, fixtures::random_vector(12, rng));
  for (int t = 0; t < 20; ++t) {
    const Vector u = fixtures::random_vector(12, rng);
    const Vector v = fixtures::random_vector(12, rng);
    EXPECT_NEAR(u.dot(H * v), v.dot(H * u), 1e-12 * (1 + std::abs(u.dot(H * v))));
  }
  EXPECT_EQ(H.applications(), 60);
  charge_hessian(st, H);
  EXPECT_EQ(st.hess_evals, 60 * 9);
  EXPECT_DOUBLE_EQ(st.epochs(), 540.0 / 60.0);
  st.cfg.charge_hessian = false;
  EXPECT_EQ(st.epochs(), 0.0);
}

TEST(Schedule, GradientBatchGrowsEveryPeriod) {
  OracleConfig c;
  c.grad_size0 = 100;
  c.grad_cap = 10000;
  c.hess_size0 = 100;
  c.hess_cap = 1000;
  OracleState st(c, 10000);
  for (Index k = 1; k < 30; ++k) advance_schedule(st, k);
  EXPECT_EQ(st.grad_size, 100);
  advance_schedule(st, 30);
  EXPECT_EQ(st.grad_size, 337);
  EXPECT_EQ(st.hess_size, 100);
}

TEST(Schedule, HessianGrowsOnlyAfterGradientCap) {
  OracleConfig c;
  c.grad_size0 = 10;
  c.grad_cap = 40;
  c.hess_size0 = 10;
  c.hess_cap = 100;
  OracleState st(c, 1000);
  Index cap_at = -1;
  for (Index k = 1; k <= 200; ++k) {
    const Index h_before = st.hess_size;
    advance_schedule(st, k);
    if (cap_at < 0 && st.grad_size == 40) cap_at = k;
    if (cap_at < 0 || k == cap_at) {
      EXPECT_EQ(st.hess_size, h_before) << k;
    }
  }
  EXPECT_EQ(cap_at, 60);
  EXPECT_EQ(st.hess_size, 100);
  OracleState again(c, 1000);
  for (Index k = 1; k <= 75; ++k) advance_schedule(again, k);
  EXPECT_EQ(again.hess_size, 33);
}

TEST(Schedule, CappedStateUnchangedAndFixedHessian) {
  OracleConfig c = fixed_batch(50, 5);
  c.hess_growth = false;
  c.hess_cap = 500;
  OracleState st(c, 1000);
  for (Index k = 1; k <= 300; ++k) advance_schedule(st, k);
  EXPECT_EQ(st.grad_size, 50);
  EXPECT_EQ(st.hess_size, 5);
}

TEST(OracleConfigCheck, RejectsBadValues) {
  OracleConfig c;
  c.grad_size0 = 0;
  EXPECT_THROW(OracleState(c, 10), std::invalid_argument);
}
