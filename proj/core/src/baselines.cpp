#include "s4n/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "s4n/driver.hpp"
#include "s4n/oracles.hpp"
#include "s4n/prox.hpp"

namespace s4n {

void RunControl::validate() const {
  if (max_iters < 0) throw std::invalid_argument("RunControl: max_iters must be >= 0");
  if (!(max_epochs > 0.0)) throw std::invalid_argument("RunControl: max_epochs must be > 0");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("RunControl: stop_tol must be >= 0");
  if (check_every < 1) throw std::invalid_argument("RunControl: check_every must be >= 1");
}

void AdagradConfig::validate() const {
  if (!(step_scale > 0.0)) throw std::invalid_argument("AdagradConfig: step_scale must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("AdagradConfig: delta must be > 0");
  if (batch_size < 0) throw std::invalid_argument("AdagradConfig: batch_size must be >= 0");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) throw std::invalid_argument("AdagradConfig: bad batch_fraction");
  control.validate();
}

void ProxSvrgConfig::validate() const {
  if (batch_size < 0) throw std::invalid_argument("ProxSvrgConfig: batch_size must be >= 0");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) throw std::invalid_argument("ProxSvrgConfig: bad batch_fraction");
  if (inner_period < 1) throw std::invalid_argument("ProxSvrgConfig: inner_period must be >= 1");
  if (!(lambda0 > 0.0)) throw std::invalid_argument("ProxSvrgConfig: lambda0 must be > 0");
  if (!(lambda_min > 0.0 && lambda_min <= lambda_max)) throw std::invalid_argument("ProxSvrgConfig: bad lambda clip");
  if (!(lambda_ema > 0.0 && lambda_ema <= 1.0)) throw std::invalid_argument("ProxSvrgConfig: bad lambda_ema");
  control.validate();
}

std::vector<double> adagrad_step_grid() {
  std::vector<double> grid;
  for (int j = -2; j <= 1; ++j) {
    for (int i = 1; i <= 9; ++i) grid.push_back(i * std::pow(10.0, j));
  }
  return grid;
}

Vector adagrad_prox(const Vector& u, const Vector& accum, double delta, double step_scale, double mu) {
  const Vector thr = (mu * step_scale) / (delta + accum.array().sqrt());
  return prox_l1(u, thr);
}

namespace {

using Clock = std::chrono::steady_clock;

Index resolve_batch(Index explicit_size, double fraction, Index N) {
  const Index b = explicit_size > 0 ? explicit_size : static_cast<Index>(std::floor(fraction * static_cast<double>(N)));
  return std::clamp<Index>(b, 1, N);
}

/// Appends the record for iterate x; returns true when the run should stop.
bool record(const CompositeProblem& p, const RunControl& ctl, Trace& trace, Index k, StepType step, const Vector& x,
            double stoch_res, double lambda, Index grad_size, double epochs_before, std::int64_t& grad_evals,
            double wall_ms) {
  TraceRecord r;
  r.k = k;
  r.step = step;
  r.psi = objective(p, x);
  r.stoch_res = stoch_res;
  r.theta = kNotEvaluated;
  r.lambda = lambda;
  r.grad_size = grad_size;
  r.hess_size = 0;
  const bool bad = !x.allFinite() || !std::isfinite(r.psi);
  const bool last = k >= ctl.max_iters || epochs_before >= ctl.max_epochs;
  if (bad || last || k % ctl.check_every == 0) {
    r.full_res = full_residual_norm(p, x);
    if (ctl.charge_termination) {
      grad_evals += p.n_points();
      epochs_before += 1.0;
    }
  }
  r.epochs = epochs_before;
  r.wall_ms = wall_ms;
  trace.records.push_back(r);
  if (bad) {
    trace.summary.status = RunStatus::NonFinite;
    trace.summary.message = "non-finite iterate at k=" + std::to_string(k);
    return true;
  }
  if (!std::isnan(r.full_res) && r.full_res <= ctl.stop_tol) {
    trace.summary.status = RunStatus::Converged;
    return true;
  }
  if (last) {
    trace.summary.status = RunStatus::MaxIterations;
    return true;
  }
  return false;
}

void finish(Trace& trace, Vector x, double epochs, double wall_ms) {
  trace.summary.iterations = trace.records.back().k;
  trace.summary.final_psi = trace.records.back().psi;
  trace.summary.final_full_res = trace.records.back().full_res;
  trace.summary.epochs = epochs;
  trace.summary.wall_ms = wall_ms;
  trace.x = std::move(x);
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Trace adagrad_run(const CompositeProblem& p, const AdagradConfig& cfg) {
  cfg.validate();
  const Index N = p.n_points();
  const double mu = p.reg_weight();
  OracleConfig oc;
  oc.grad_size0 = oc.grad_cap = resolve_batch(cfg.batch_size, cfg.batch_fraction, N);
  oc.hess_size0 = oc.hess_cap = 1;
  oc.seed = cfg.seed;
  OracleState st(oc, N);

  AdagradState a;
  a.accum = Vector::Zero(p.dim());
  a.delta = cfg.delta;
  a.step_scale = cfg.step_scale;
  a.batch_size = st.grad_size;

  Vector x = cfg.control.x0.size() == 0 ? Vector::Zero(p.dim()) : cfg.control.x0;
  if (x.size() != p.dim()) throw std::invalid_argument("adagrad_run: x0 has the wrong dimension");

  Trace trace;
  double wall = 0.0;
  double step_norm = kNotEvaluated;
  for (Index k = 0;; ++k) {
    if (record(p, cfg.control, trace, k, k == 0 ? StepType::Init : StepType::Prox, x, step_norm, a.step_scale,
               a.batch_size, st.epochs(), st.grad_evals, wall)) {
      break;
    }
    const auto t0 = Clock::now();
    const Vector g = stochastic_gradient(p, st, x, k);
    a.accum.array() += g.array().square();
    const Vector u = x - (a.step_scale * g.array() / (a.delta + a.accum.array().sqrt())).matrix();
    Vector next = adagrad_prox(u, a.accum, a.delta, a.step_scale, mu);
    step_norm = (next - x).norm();
    x = std::move(next);
    wall += elapsed_ms(t0);
  }
  finish(trace, std::move(x), st.epochs(), wall);
  return trace;
}

Trace proxsvrg_run(const CompositeProblem& p, const ProxSvrgConfig& cfg) {
  cfg.validate();
  const Index N = p.n_points();
  const double mu = p.reg_weight();
  OracleConfig oc;
  oc.grad_size0 = oc.grad_cap = resolve_batch(cfg.batch_size, cfg.batch_fraction, N);
  oc.hess_size0 = oc.hess_cap = 1;
  oc.vr_enabled = true;
  oc.vr_period = cfg.inner_period;
  oc.seed = cfg.seed;
  OracleState st(oc, N);

  S4NConfig lam;
  lam.lambda_min = cfg.lambda_min;
  lam.lambda_max = cfg.lambda_max;
  lam.lambda_ema = cfg.lambda_ema;
  lam.lambda_average = cfg.lambda_average;
  Index history = 1;

  Vector x = cfg.control.x0.size() == 0 ? Vector::Zero(p.dim()) : cfg.control.x0;
  if (x.size() != p.dim()) throw std::invalid_argument("proxsvrg_run: x0 has the wrong dimension");

  double lambda = cfg.lambda0;
  Vector prev_anchor_x;
  Vector prev_anchor_grad;
  Trace trace;
  double wall = 0.0;
  double stoch_res = kNotEvaluated;
  for (Index k = 0;; ++k) {
    if (record(p, cfg.control, trace, k, k == 0 ? StepType::Init : StepType::Prox, x, stoch_res, lambda,
               st.grad_size, st.epochs(), st.grad_evals, wall)) {
      break;
    }
    const auto t0 = Clock::now();
    const Vector g = stochastic_gradient(p, st, x, k);
    if (k % cfg.inner_period == 0) {
      if (cfg.adapt_lambda && prev_anchor_x.size() != 0) {
        lambda = update_lambda(lambda, history++, prev_anchor_x, prev_anchor_grad, st.vr_anchor_x, st.vr_anchor_grad, lam);
      }
      prev_anchor_x = st.vr_anchor_x;
      prev_anchor_grad = st.vr_anchor_grad;
    }
    const ResidualParts parts = residual_parts(x, g, ProxMetric(lambda), mu);
    stoch_res = parts.F.norm();
    x = parts.p;
    wall += elapsed_ms(t0);
  }
  finish(trace, std::move(x), st.epochs(), wall);
  return trace;
}

}  // namespace s4n
