#pragma once

#include <functional>

#include "s4n/types.hpp"

namespace s4n {

enum class ScheduleMode { Global, Linear, Superlinear, LightTail };

/// Inputs of the high-probability sample-size lower bounds.
///
/// sigma_bar / rho_bar are user-supplied variance proxies of the gradient and
/// Hessian oracles; lipschitz_F and inverse_bound (C) enter through
/// mu(x) = min{(2 L_F C)^-1, 1} x.
struct ScheduleParams {
  std::function<double(Index)> delta;
  double sigma_bar = 1.0;
  double rho_bar = 1.0;
  double lambda_m = 1.0;
  double gamma_f = 0.5;
  double gamma_eta = 0.5;
  Index dim = 1;
  std::function<double(Index)> eps1;
  std::function<double(Index)> eps2;
  double p = 0.5;
  double lipschitz_F = 1.0;
  double inverse_bound = 1.0;
  Index ell_bar = 1;
  /// gamma_k (nonincreasing, -> 0) and rho_k (-> 0) of the superlinear mode.
  std::function<double(Index)> gamma_seq;
  std::function<double(Index)> rho_seq;

  void validate() const;
};

/// Ceiled lower bounds. Stored as double: the bounds overflow 64-bit counts
/// for moderately large k.
struct SampleSizes {
  double n_g = 0.0;
  double n_h = 0.0;
};

/// kappa_n = (2 log(n + 2) - 1) e.
double kappa_n(Index n);

/// mu(x) = min{(2 L_F C)^-1, 1} x.
double mu_contraction(const ScheduleParams& sp, double x);

/// mu_p(x) = min{x, x^(1/p), x^(1/(1-p))}.
double mu_p(double x, double p);

/// Upsilon_k = min{mu(e1), mu_p(e2)} with e1 replaced by min{e1, r^(k - ell_bar)}
/// when `rate` is given.
double upsilon(const ScheduleParams& sp, Index k, std::function<double(Index)> rate = {});

/// Gamma_k, Gamma^o_k or Gamma^<>_k depending on mode (LightTail uses Gamma_k).
double gamma_threshold(const ScheduleParams& sp, Index k, ScheduleMode mode);

SampleSizes theoretical_schedule(const ScheduleParams& sp, Index k, ScheduleMode mode);

}  // namespace s4n
