#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "s4n/diagnostics.hpp"
#include "test_support.hpp"

using namespace s4n;

TEST(MetricBound, EqualMetricsGiveFactorOne) {
  for (double lam : {1e-3, 0.5, 7.0, 1e4}) EXPECT_DOUBLE_EQ(metric_bound_factor(lam, lam), 1.0);
  EXPECT_THROW(metric_bound_factor(0.0, 1.0), std::invalid_argument);
}

TEST(MetricBound, HoldsOnRandomTrials) {
  for (double mu : {0.0, 0.1, 3.0}) {
    const CheckReport r = check_metric_bound(10, mu, 10000, 17);
    EXPECT_EQ(r.trials, 10000);
    EXPECT_TRUE(r.passed()) << "mu=" << mu << " slack=" << r.max_slack;
  }
}

TEST(MetricBound, SmoothCaseIsTightForShrinkingStep) {
  std::mt19937_64 rng(2);
  const Vector x = fixtures::random_vector(6, rng);
  const Vector g = fixtures::random_vector(6, rng);
  EXPECT_NEAR(metric_bound_slack(x, g, 2.0, 1.0, 0.0), 2.0 * g.norm() - metric_bound_factor(2.0, 1.0) * g.norm(),
              1e-12);
  EXPECT_LE(metric_bound_slack(x, g, 2.0, 1.0, 0.0), 1e-12);
}

TEST(GenConv, InactiveStepsKeepValue) {
  GenConvParams gp;
  gp.a0 = 2.0;
  gp.nu.assign(50, 0.01);
  gp.eps.assign(50, 0.1);
  const GenConvResult r = genconv_simulate(gp, std::vector<int>(50, 0));
  for (double a : r.a) EXPECT_EQ(a, 2.0);
  EXPECT_EQ(r.weighted_sum, 0.0);
  EXPECT_EQ(r.violations, 0);
}

TEST(GenConv, AlwaysActiveWithoutPerturbationIsGeometric) {
  GenConvParams gp;
  gp.a0 = 3.0;
  gp.eta = 0.7;
  gp.nu.assign(30, 0.0);
  gp.eps.assign(30, 0.0);
  const GenConvResult r = genconv_simulate(gp, std::vector<int>(30, 1));
  for (std::size_t k = 0; k < r.a.size(); ++k) EXPECT_NEAR(r.a[k], 3.0 * std::pow(0.7, k), 1e-12);
  EXPECT_DOUBLE_EQ(r.c_nu, 1.0);
  EXPECT_DOUBLE_EQ(r.bound_sup, 3.0);
  EXPECT_EQ(r.violations, 0);
}

TEST(GenConv, BoundsHoldOnRandomSequences) {
  const CheckReport r = check_genconv(300, 150, 5);
  EXPECT_GT(r.trials, 0);
  EXPECT_TRUE(r.passed()) << r.max_slack;
}

TEST(GenConv, ParameterChecks) {
  GenConvParams gp;
  gp.eta = 1.0;
  EXPECT_THROW(gp.validate(), std::invalid_argument);
  gp = GenConvParams{};
  gp.q = 0.25;
  EXPECT_THROW(gp.validate(), std::invalid_argument);
  gp = GenConvParams{};
  EXPECT_THROW(genconv_simulate(gp, std::vector<int>(3, 1)), std::invalid_argument);
}

TEST(ProxDescent, AlphaBarAndZeroStep) {
  EXPECT_DOUBLE_EQ(prox_descent_alpha_bar(0.5, 1.5, 0.1, 4.0), 2.0 * 0.25 / 0.4);
  const CompositeProblem p(fixtures::small_dataset(80, 10, 0.4, 3), LossKind::Logistic, 0.01);
  std::mt19937_64 rng(3);
  const Vector x = fixtures::random_vector(10, rng);
  const std::vector<Index> batch{0, 1, 2};
  const Vector g = loss_grad(p, x, batch);
  EXPECT_NEAR(prox_descent_slack(p, x, g, 0.3, 0.0, 0.5, 1.5), 0.0, 1e-15);
}

TEST(ProxDescent, HoldsOnRandomTrials) {
  const CompositeProblem p(fixtures::small_dataset(200, 15, 0.3, 4), LossKind::Logistic, 0.01);
  const CheckReport r = check_prox_descent(p, 0.5, 1.5, 400, 9);
  EXPECT_EQ(r.trials, 400);
  EXPECT_TRUE(r.passed()) << r.max_slack;
  EXPECT_THROW(check_prox_descent(p, 0.5, 2.5, 10, 1), std::invalid_argument);
}

TEST(StrongConvexity, ConstantsRecomputed) {
  const double mu_f = 0.2;
  const double mu_r = 0.05;
  const double L = 3.0;
  const double lm = 0.1;
  const double lM = 10.0;
  const auto c = StrongConvexityCerts::make(mu_f, mu_r, L, lm, lM);
  const double mb = mu_f + mu_r;
  const double b1 = L - 2.0 * lm - mu_r;
  const double b2 = (lM + mu_r) * (lM + mu_r) / mb;
  EXPECT_DOUBLE_EQ(c.b1, b1);
  EXPECT_DOUBLE_EQ(c.b2, b2);
  const double s = std::sqrt(b1 + b2) + std::sqrt(b2);
  EXPECT_NEAR(c.B1(0.0), s * s / mb, 1e-9 * c.B1(0.0));
  for (double tau : {0.1, 0.5, 2.0}) {
    const double a = c.alpha(tau);
    EXPECT_NEAR(c.B1_at(tau, a), c.B1(tau), 1e-9 * c.B1(tau));
    EXPECT_GE(c.B1_at(tau, 1.1 * a), c.B1(tau));
    EXPECT_GE(c.B1_at(tau, 0.9 * a), c.B1(tau));
    EXPECT_GT(c.B2(tau), 0.0);
  }
  EXPECT_THROW(static_cast<void>(c.B2(0.0)), std::domain_error);
  EXPECT_THROW(StrongConvexityCerts::make(0.0, 0.0, 1.0, 0.1, 1.0), std::invalid_argument);
}

TEST(StrongConvexity, BoundHoldsWithReferenceSolution) {
  const CheckReport r = run_diagnostic("strconv-bound", 3);
  EXPECT_EQ(r.trials, 1000);
  EXPECT_TRUE(r.passed()) << r.max_slack;
}

TEST(ResidualLipschitz, Formula) {
  EXPECT_DOUBLE_EQ(residual_lipschitz_constant(1.0, 1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(residual_lipschitz_constant(0.25, 1.0, 2.0), 1.0 + 2.0 + 2.0 * 8.0);
}

TEST(Concentration, BoundsAndNames) {
  EXPECT_DOUBLE_EQ(concentration_bound(ConcentrationKind::Vector, 5, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(concentration_bound(ConcentrationKind::VectorLightTail, 5, 3.0), std::exp(-3.0));
  EXPECT_DOUBLE_EQ(concentration_bound(ConcentrationKind::MatrixLightTail, 4, 3.0), 8.0 * std::exp(-3.0));
  for (auto k : {ConcentrationKind::Vector, ConcentrationKind::VectorLightTail, ConcentrationKind::Matrix,
                 ConcentrationKind::MatrixLightTail}) {
    EXPECT_EQ(parse_concentration_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_concentration_kind("scalar"), std::invalid_argument);
}

TEST(Concentration, TrivialBoundAlwaysPasses) {
  const CheckReport r = concentration_mc(4, 5, ConcentrationKind::Vector, 2000, 0.5, 1);
  EXPECT_TRUE(r.passed());
}

TEST(Concentration, MonteCarloWithinBounds) {
  EXPECT_TRUE(concentration_mc(10, 50, ConcentrationKind::Vector, 20000, 3.0, 2).passed());
  EXPECT_TRUE(concentration_mc(6, 8, ConcentrationKind::Matrix, 20000, 4.0, 3).passed());
}

TEST(Diagnostics, EveryNamedCheckPasses) {
  for (const std::string& name : diagnostic_names()) {
    const CheckReport r = run_diagnostic(name, 1);
    EXPECT_GT(r.trials, 0) << name;
    EXPECT_TRUE(r.passed()) << name << " slack=" << r.max_slack;
  }
  EXPECT_THROW(run_diagnostic("nope"), std::invalid_argument);
}

TEST(Diagnostics, JsonReport) {
  CheckReport r;
  r.name = "x";
  r.trials = 3;
  r.violations = 1;
  r.max_slack = 0.5;
  r.add("m", 2.0);
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j.at("check"), "x");
  EXPECT_EQ(j.at("trials"), 3);
  EXPECT_EQ(j.at("passed"), false);
  EXPECT_DOUBLE_EQ(j.at("metrics").at("m").get<double>(), 2.0);
}
