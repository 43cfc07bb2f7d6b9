#include <cmath>

#include <gtest/gtest.h>

#include "s4n/schedule.hpp"
#include "s4n/sequences.hpp"

using namespace s4n;

namespace {

constexpr double kVarpi = 0.4;

ScheduleParams example_params() {
  ScheduleParams sp;
  sp.p = 0.5;
  sp.delta = [](Index k) { return 0.5 * std::pow(static_cast<double>(k), -8.0); };
  sp.eps1 = [](Index k) { return 0.5 * std::pow(static_cast<double>(k), -(2.0 + kVarpi / 4.0)); };
  sp.eps2 = [](Index k) { return 0.5 * std::pow(static_cast<double>(k), -(1.0 + kVarpi / 8.0)); };
  sp.dim = 50;
  sp.ell_bar = 1;
  return sp;
}

}  // namespace

TEST(TheoreticalSchedule, WorkedExampleGrowthRate) {
  const ScheduleParams sp = example_params();
  double prev = 0.0;
  double ratio_lo = INFINITY;
  double ratio_hi = 0.0;
  double big_o_at_100 = 0.0;
  for (Index k = 2; k <= 2000; ++k) {
    const SampleSizes s = theoretical_schedule(sp, k, ScheduleMode::LightTail);
    EXPECT_GE(s.n_g, prev) << k;
    prev = s.n_g;
    const double kk = static_cast<double>(k);
    if (k >= 100) {
      const double big_o = s.n_g / (std::pow(kk, 4.0 + kVarpi) * std::log(kk));
      if (k == 100) big_o_at_100 = big_o;
      EXPECT_LE(big_o, big_o_at_100) << k;
      const double r = s.n_g / (std::pow(kk, 4.0 + kVarpi / 2.0) * std::log(kk));
      ratio_lo = std::min(ratio_lo, r);
      ratio_hi = std::max(ratio_hi, r);
    }
  }
  EXPECT_LT(ratio_hi / ratio_lo, 2.0);
}

TEST(TheoreticalSchedule, LightTailNeedsFewerHessianSamples) {
  ScheduleParams sp = example_params();
  for (Index k : {5, 20, 100}) {
    const SampleSizes g = theoretical_schedule(sp, k, ScheduleMode::Global);
    const SampleSizes l = theoretical_schedule(sp, k, ScheduleMode::LightTail);
    EXPECT_LT(l.n_h, g.n_h) << k;
  }
}

TEST(TheoreticalSchedule, GammaAttainsContractionOfOne) {
  ScheduleParams sp = example_params();
  sp.eps1 = [](Index) { return 1.0; };
  sp.eps2 = [](Index) { return 1.0; };
  sp.lipschitz_F = 50.0;
  sp.inverse_bound = 4.0;
  EXPECT_DOUBLE_EQ(gamma_threshold(sp, 3, ScheduleMode::Global), 1.0 / (2.0 * 50.0 * 4.0));
}

TEST(TheoreticalSchedule, GlobalModeFormula) {
  ScheduleParams sp = example_params();
  sp.eps1 = [](Index) { return 0.1; };
  sp.eps2 = [](Index) { return 0.9; };
  sp.sigma_bar = 2.0;
  sp.rho_bar = 3.0;
  sp.lambda_m = 0.5;
  sp.gamma_f = 0.25;
  const Index k = 3;
  const double delta = sp.delta(k);
  const double gamma = std::min(0.5 * 0.1, 0.81);
  const SampleSizes s = theoretical_schedule(sp, k, ScheduleMode::Global);
  EXPECT_EQ(s.n_g, std::ceil(std::pow(2.0 * 2.0 / (0.5 * gamma), 2) / delta));
  EXPECT_EQ(s.n_h, std::ceil(kappa_n(50) / delta * std::pow(2.0 * 3.0 / (0.5 * 0.25), 2)));
}

TEST(TheoreticalSchedule, LinearModeTightensWithRate) {
  ScheduleParams sp = example_params();
  sp.eps1 = [](Index) { return 1e-3; };
  sp.gamma_eta = 0.5;
  const SampleSizes g = theoretical_schedule(sp, 40, ScheduleMode::Global);
  const SampleSizes l = theoretical_schedule(sp, 40, ScheduleMode::Linear);
  EXPECT_GT(l.n_g, g.n_g);
}

TEST(TheoreticalSchedule, SuperlinearNeedsSequences) {
  ScheduleParams sp = example_params();
  EXPECT_THROW(theoretical_schedule(sp, 4, ScheduleMode::Superlinear), std::invalid_argument);
  sp.gamma_seq = [](Index k) { return 1.0 / static_cast<double>(k + 1); };
  sp.rho_seq = [](Index k) { return 1.0 / static_cast<double>(k + 1); };
  const SampleSizes s = theoretical_schedule(sp, 4, ScheduleMode::Superlinear);
  EXPECT_EQ(s.n_h, std::ceil(1.0 / (sp.delta(4) * 0.2)));
}

TEST(TheoreticalSchedule, Helpers) {
  EXPECT_NEAR(kappa_n(8), (2.0 * std::log(10.0) - 1.0) * std::exp(1.0), 1e-12);
  EXPECT_DOUBLE_EQ(mu_p(0.25, 0.5), 0.0625);
  EXPECT_DOUBLE_EQ(mu_p(4.0, 0.5), 4.0);
  ScheduleParams sp = example_params();
  sp.delta = [](Index) { return 1.5; };
  EXPECT_THROW(theoretical_schedule(sp, 2, ScheduleMode::Global), std::invalid_argument);
}

TEST(PowerRule, ValuesAndSummability) {
  const PowerRule r{500.0, 1.1};
  EXPECT_DOUBLE_EQ(r(1.0), 500.0);
  EXPECT_NEAR(r(10.0), 500.0 * std::pow(10.0, -1.1), 1e-12);
  EXPECT_TRUE(r.summable());
  EXPECT_FALSE(r.summable(0.5));
  EXPECT_FALSE((PowerRule{1.0, 1.0}).summable());
  EXPECT_TRUE((PowerRule{0.0, 0.0}).summable());
  EXPECT_EQ((PowerRule{0.0, 1.0})(3.0), 0.0);
}
