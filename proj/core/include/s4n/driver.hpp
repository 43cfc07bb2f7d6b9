#pragma once

#include <functional>
#include <limits>
#include <string_view>

#include "s4n/model.hpp"
#include "s4n/newton.hpp"
#include "s4n/oracles.hpp"
#include "s4n/sequences.hpp"
#include "s4n/trace.hpp"

namespace s4n {

struct S4NConfig {
  double eta = 0.85;
  double p_exp = 0.5;
  double beta = 1.0;
  PowerRule nu_rule{500.0, 1.1};
  PowerRule eps1_rule{500.0, 1.1};
  PowerRule eps2_rule{500.0, 1.1};
  double alpha = 1e-2;
  bool check_growth2 = false;
  /// Initial theta; negative means "use the initial stochastic residual norm".
  double theta0 = -1.0;
  double lambda0 = 0.1;
  double lambda_min = 1e-3;
  double lambda_max = 1e4;
  /// Running: equal-weight mean of all previous lambdas and the new estimate.
  /// Ema: exponential moving average with weight `lambda_ema` on the new estimate.
  enum class LambdaAverage { Running, Ema } lambda_average = LambdaAverage::Running;
  double lambda_ema = 0.5;
  bool adapt_lambda = true;
  Index max_iters = 500;
  /// Stop once the epoch counter reaches this budget.
  double max_epochs = std::numeric_limits<double>::infinity();
  /// Stop when ||F^I(x)|| <= stop_tol.
  double stop_tol = 1e-8;
  Index check_every = 10;
  /// Charge the full-gradient passes of termination checks to the epoch counter.
  bool charge_termination = false;
  /// Reject every Newton step. Useful for isolating the fallback branch.
  bool force_reject = false;
  /// Starting point; empty means zero.
  Vector x0;

  void validate() const;
};

struct SolverState {
  Vector x;
  double theta = 0.0;
  double lambda = 0.0;
  Index k = 0;
  double epochs = 0.0;
  /// Batch s^{k} used for the current residual.
  IndexList pending_batch;
  Index accepted_newton_count = 0;
  Index fallback_count = 0;
  /// Number of lambda values averaged so far (lambda0 counts as one).
  Index lambda_history = 1;
};

/// Everything an observer needs to audit one transition x^k -> x^{k+1}.
struct IterationEvent {
  Index k = 0;
  const Vector* x_prev = nullptr;
  /// F^{Lambda_k}_{s^k}(x^k).
  const Vector* F = nullptr;
  const Vector* direction = nullptr;
  double alpha = 0.0;
  bool accepted = false;
  /// ||F^{Lambda_{k+1}}_{s^{k+1}}(z_n)||.
  double res_trial = 0.0;
  double theta_prev = 0.0;
  double growth1_bound = 0.0;
  const SolverState* state = nullptr;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

/// "running" or "ema".
S4NConfig::LambdaAverage parse_lambda_average(std::string_view name);

/// res_new <= (eta + nu_k) theta + eps1_k.
bool check_growth1(double res_new, double theta, Index k, const S4NConfig& cfg);

/// psi_new <= psi_old + beta theta^{1-p} res_new^p + eps2_k, with 0^0 = 1.
bool check_growth2(double psi_new, double psi_old, double theta, double res_new, Index k, const S4NConfig& cfg);

Vector prox_grad_step(const Vector& x, const Vector& F, double alpha);

/// Ratio ||dx|| / ||dg|| clipped to [lambda_min, lambda_max] and averaged with
/// `lambda_old`, which summarizes `history` earlier values. Returns lambda_old
/// when ||dg|| < 1e-15.
double update_lambda(double lambda_old, Index history, const Vector& x_prev, const Vector& g_prev,
                     const Vector& x_new, const Vector& g_new, const S4NConfig& cfg);

/// ||x - prox(x - grad f(x), mu)|| with the exact gradient and lambda = 1.
double full_residual_norm(const CompositeProblem& p, const Vector& x);

Trace s4n_run(const CompositeProblem& p, OracleState& oracle, const S4NConfig& cfg, const NewtonConfig& ncfg,
              const IterationObserver& observer = {});

/// Full-batch gradient and Hessian.
Trace s2nd_run(const CompositeProblem& p, const S4NConfig& cfg, const NewtonConfig& ncfg,
               const IterationObserver& observer = {});

}  // namespace s4n
