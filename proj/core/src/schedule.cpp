#include "s4n/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace s4n {

void ScheduleParams::validate() const {
  if (!delta || !eps1 || !eps2) throw std::invalid_argument("ScheduleParams: delta, eps1 and eps2 rules are required");
  if (!(sigma_bar > 0.0 && rho_bar > 0.0 && lambda_m > 0.0 && gamma_f > 0.0 && lipschitz_F > 0.0 && inverse_bound > 0.0)) {
    throw std::invalid_argument("ScheduleParams: constants must be positive");
  }
  if (!(gamma_eta > 0.0 && gamma_eta < 1.0)) throw std::invalid_argument("ScheduleParams: gamma_eta must lie in (0, 1)");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ScheduleParams: p must lie in (0, 1)");
  if (dim < 1) throw std::invalid_argument("ScheduleParams: dim must be >= 1");
}

double kappa_n(Index n) { return (2.0 * std::log(static_cast<double>(n) + 2.0) - 1.0) * std::numbers::e; }

double mu_contraction(const ScheduleParams& sp, double x) {
  return std::min(1.0 / (2.0 * sp.lipschitz_F * sp.inverse_bound), 1.0) * x;
}

double mu_p(double x, double p) { return std::min(x, std::min(std::pow(x, 1.0 / p), std::pow(x, 1.0 / (1.0 - p)))); }

double upsilon(const ScheduleParams& sp, Index k, std::function<double(Index)> rate) {
  double e1 = sp.eps1(k);
  if (rate) e1 = std::min(e1, std::pow(rate(k), static_cast<double>(k - sp.ell_bar)));
  return std::min(mu_contraction(sp, e1), mu_p(sp.eps2(k), sp.p));
}

double gamma_threshold(const ScheduleParams& sp, Index k, ScheduleMode mode) {
  std::function<double(Index)> rate;
  if (mode == ScheduleMode::Linear) {
    const double g = sp.gamma_eta;
    rate = [g](Index) { return g; };
  } else if (mode == ScheduleMode::Superlinear) {
    if (!sp.gamma_seq) throw std::invalid_argument("superlinear schedule needs gamma_seq");
    rate = sp.gamma_seq;
  }
  return std::min(upsilon(sp, k - 1, rate), upsilon(sp, k, rate));
}

SampleSizes theoretical_schedule(const ScheduleParams& sp, Index k, ScheduleMode mode) {
  sp.validate();
  if (k < sp.ell_bar) {
    throw std::invalid_argument("theoretical_schedule: k = " + std::to_string(k) + " precedes ell_bar");
  }
  const double delta = sp.delta(k);
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("theoretical_schedule: delta_k must lie in (0, 1)");
  const double gamma = gamma_threshold(sp, k, mode);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("theoretical_schedule: nonpositive Gamma_k (degenerate epsilon sequences)");
  }

  const double grad_ratio = 2.0 * sp.sigma_bar / (sp.lambda_m * gamma);
  const double hess_ratio = 2.0 * sp.rho_bar / (sp.lambda_m * sp.gamma_f);
  const double n = static_cast<double>(sp.dim);

  SampleSizes out;
  switch (mode) {
    case ScheduleMode::Global:
    case ScheduleMode::Linear:
      out.n_g = grad_ratio * grad_ratio / delta;
      out.n_h = kappa_n(sp.dim) / delta * hess_ratio * hess_ratio;
      break;
    case ScheduleMode::Superlinear: {
      if (!sp.rho_seq) throw std::invalid_argument("superlinear schedule needs rho_seq");
      const double rho = sp.rho_seq(k);
      if (!(rho > 0.0)) throw std::invalid_argument("superlinear schedule: rho_k must be positive");
      out.n_g = grad_ratio * grad_ratio / delta;
      out.n_h = 1.0 / (delta * rho);
      break;
    }
    case ScheduleMode::LightTail: {
      const double t = (1.0 + std::sqrt(3.0 * std::log(1.0 / delta))) * grad_ratio;
      out.n_g = t * t;
      out.n_h = 3.0 * std::log(2.0 * n / delta) * hess_ratio * hess_ratio;
      break;
    }
  }
  out.n_g = std::ceil(out.n_g);
  out.n_h = std::ceil(out.n_h);
  return out;
}

}  // namespace s4n
