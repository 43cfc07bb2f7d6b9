#include "s4n/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace s4n {

void S4NConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("S4NConfig: eta must lie in (0, 1)");
  if (!(p_exp > 0.0 && p_exp < 1.0)) throw std::invalid_argument("S4NConfig: p must lie in (0, 1)");
  if (!(beta > 0.0)) throw std::invalid_argument("S4NConfig: beta must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("S4NConfig: alpha must lie in (0, 1]");
  if (!nu_rule.summable()) throw std::invalid_argument("S4NConfig: nu sequence must be summable");
  if (check_growth2) {
    if (!eps2_rule.summable()) throw std::invalid_argument("S4NConfig: eps2 sequence must be summable");
    if (!eps1_rule.summable(p_exp)) throw std::invalid_argument("S4NConfig: eps1^p must be summable");
  } else if (!eps1_rule.summable()) {
    throw std::invalid_argument("S4NConfig: eps1 sequence must be summable");
  }
  if (nu_rule.coeff < 0.0 || eps1_rule.coeff < 0.0 || eps2_rule.coeff < 0.0) {
    throw std::invalid_argument("S4NConfig: sequence coefficients must be >= 0");
  }
  if (!(lambda_min > 0.0 && lambda_min <= lambda_max)) throw std::invalid_argument("S4NConfig: bad lambda clip");
  if (!(lambda0 > 0.0 && std::isfinite(lambda0))) throw std::invalid_argument("S4NConfig: lambda0 must be > 0");
  if (!(lambda_ema > 0.0 && lambda_ema <= 1.0)) throw std::invalid_argument("S4NConfig: lambda_ema must lie in (0, 1]");
  if (max_iters < 0) throw std::invalid_argument("S4NConfig: max_iters must be >= 0");
  if (!(max_epochs > 0.0)) throw std::invalid_argument("S4NConfig: max_epochs must be > 0");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("S4NConfig: stop_tol must be >= 0");
  if (check_every < 1) throw std::invalid_argument("S4NConfig: check_every must be >= 1");
}

bool check_growth1(double res_new, double theta, Index k, const S4NConfig& cfg) {
  const double kk = static_cast<double>(k + 1);
  return res_new <= (cfg.eta + cfg.nu_rule(kk)) * theta + cfg.eps1_rule(kk);
}

bool check_growth2(double psi_new, double psi_old, double theta, double res_new, Index k, const S4NConfig& cfg) {
  const double kk = static_cast<double>(k + 1);
  const double t = (theta == 0.0 && 1.0 - cfg.p_exp == 0.0) ? 1.0 : std::pow(theta, 1.0 - cfg.p_exp);
  const double r = (res_new == 0.0 && cfg.p_exp == 0.0) ? 1.0 : std::pow(res_new, cfg.p_exp);
  return psi_new <= psi_old + cfg.beta * t * r + cfg.eps2_rule(kk);
}

Vector prox_grad_step(const Vector& x, const Vector& F, double alpha) { return x - alpha * F; }

S4NConfig::LambdaAverage parse_lambda_average(std::string_view name) {
  if (name == "running") return S4NConfig::LambdaAverage::Running;
  if (name == "ema") return S4NConfig::LambdaAverage::Ema;
  throw std::invalid_argument("unknown lambda averaging mode: " + std::string(name));
}

double update_lambda(double lambda_old, Index history, const Vector& x_prev, const Vector& g_prev,
                     const Vector& x_new, const Vector& g_new, const S4NConfig& cfg) {
  const double den = (g_new - g_prev).norm();
  if (den < 1e-15) return lambda_old;
  const double l1 = (x_new - x_prev).norm() / den;
  const double l2 = std::clamp(l1, cfg.lambda_min, cfg.lambda_max);
  const double w = cfg.lambda_average == S4NConfig::LambdaAverage::Running
                       ? 1.0 / static_cast<double>(std::max<Index>(history, 0) + 1)
                       : cfg.lambda_ema;
  return (1.0 - w) * lambda_old + w * l2;
}

double full_residual_norm(const CompositeProblem& p, const Vector& x) {
  return residual(x, full_gradient(p, x), ProxMetric(1.0), p.reg_weight()).norm();
}

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  void start() { t0_ = Clock::now(); }
  void stop() { total_ += std::chrono::duration<double, std::milli>(Clock::now() - t0_).count(); }
  [[nodiscard]] double ms() const { return total_; }

 private:
  Clock::time_point t0_;
  double total_ = 0.0;
};

bool finite(const Vector& v) { return v.allFinite(); }

}  // namespace

Trace s4n_run(const CompositeProblem& p, OracleState& st, const S4NConfig& cfg, const NewtonConfig& ncfg,
              const IterationObserver& observer) {
  cfg.validate();
  ncfg.validate();
  if (st.n_points != p.n_points()) throw std::invalid_argument("s4n_run: oracle state built for a different problem");
  const double mu = p.reg_weight();
  const Index n = p.dim();

  Trace trace;
  Stopwatch clock;

  SolverState s;
  s.x = cfg.x0.size() == 0 ? Vector::Zero(n) : cfg.x0;
  if (s.x.size() != n) throw std::invalid_argument("s4n_run: x0 has the wrong dimension");
  s.lambda = cfg.lambda0;

  clock.start();
  s.pending_batch = draw_gradient_batch(st);
  Vector g = gradient_on_batch(p, st, s.x, s.pending_batch, 0);
  clock.stop();

  double res0 = -1.0;
  StepType how = StepType::Init;

  for (;;) {
    clock.start();
    const ProxMetric metric(s.lambda);
    const ResidualParts parts = residual_parts(s.x, g, metric, mu);
    const double res = parts.F.norm();
    if (res0 < 0.0) {
      res0 = res;
      s.theta = cfg.theta0 >= 0.0 ? cfg.theta0 : res;
    }
    clock.stop();

    TraceRecord rec;
    rec.k = s.k;
    rec.step = how;
    rec.psi = objective(p, s.x);
    rec.stoch_res = res;
    rec.theta = s.theta;
    rec.lambda = s.lambda;
    rec.grad_size = st.grad_size;
    rec.hess_size = st.hess_size;

    const bool bad = !finite(s.x) || !std::isfinite(res) || !std::isfinite(rec.psi);
    const bool last = s.k >= cfg.max_iters || st.epochs() >= cfg.max_epochs;
    if (bad || last || s.k % cfg.check_every == 0) {
      rec.full_res = full_residual_norm(p, s.x);
      if (cfg.charge_termination) st.grad_evals += p.n_points();
    }
    s.epochs = st.epochs();
    rec.epochs = s.epochs;
    rec.wall_ms = clock.ms();
    trace.records.push_back(rec);

    if (bad) {
      trace.summary.status = RunStatus::NonFinite;
      trace.summary.message = "non-finite iterate or residual at k=" + std::to_string(s.k);
      break;
    }
    if (!std::isnan(rec.full_res) && rec.full_res <= cfg.stop_tol) {
      trace.summary.status = RunStatus::Converged;
      break;
    }
    if (last) {
      trace.summary.status = RunStatus::MaxIterations;
      break;
    }

    clock.start();
    const JacobianMask mask = jacobian_mask(parts.u, mu * s.lambda);
    const SubsampledHessian hess = stochastic_hess_operator(p, st, s.x);
    const StepControl ctl = adaptive_policy(res, res0, ncfg);
    NewtonResult nr;
    try {
      nr = newton_step(parts.F, mask, hess, metric, ctl, ncfg.solver);
    } catch (const std::runtime_error&) {
      nr.direction = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    }
    charge_hessian(st, hess);

    const Vector zn = s.x + nr.direction;
    advance_schedule(st, s.k + 1);
    IndexList next_batch = draw_gradient_batch(st);

    bool accepted = false;
    double res_trial = std::numeric_limits<double>::infinity();
    Vector g_next;
    double lambda_next = s.lambda;
    if (finite(zn)) {
      g_next = gradient_on_batch(p, st, zn, next_batch, s.k + 1);
      lambda_next = cfg.adapt_lambda ? update_lambda(s.lambda, s.lambda_history, s.x, g, zn, g_next, cfg) : s.lambda;
      res_trial = residual(zn, g_next, ProxMetric(lambda_next), mu).norm();
      accepted = !cfg.force_reject && check_growth1(res_trial, s.theta, s.k, cfg);
      if (accepted && cfg.check_growth2) {
        clock.stop();
        const double psi_new = objective(p, zn);
        clock.start();
        st.grad_evals += p.n_points();
        accepted = check_growth2(psi_new, rec.psi, s.theta, res_trial, s.k, cfg);
      }
    }

    const Vector x_prev = s.x;
    const double theta_prev = s.theta;
    if (accepted) {
      s.x = zn;
      g = std::move(g_next);
      s.lambda = lambda_next;
      if (cfg.adapt_lambda) ++s.lambda_history;
      s.theta = res_trial;
      ++s.accepted_newton_count;
      how = StepType::Newton;
    } else {
      s.x = prox_grad_step(x_prev, parts.F, cfg.alpha);
      Vector gp = gradient_on_batch(p, st, s.x, next_batch, s.k + 1);
      if (cfg.adapt_lambda) s.lambda = update_lambda(s.lambda, s.lambda_history++, x_prev, g, s.x, gp, cfg);
      g = std::move(gp);
      ++s.fallback_count;
      how = StepType::Prox;
    }
    s.pending_batch = std::move(next_batch);
    clock.stop();

    if (observer) {
      IterationEvent ev;
      ev.k = s.k;
      ev.x_prev = &x_prev;
      ev.F = &parts.F;
      ev.direction = &nr.direction;
      ev.alpha = cfg.alpha;
      ev.accepted = accepted;
      ev.res_trial = res_trial;
      ev.theta_prev = theta_prev;
      const double kk = static_cast<double>(s.k + 1);
      ev.growth1_bound = (cfg.eta + cfg.nu_rule(kk)) * theta_prev + cfg.eps1_rule(kk);
      ev.state = &s;
      observer(ev);
    }
    ++s.k;
  }

  trace.summary.iterations = s.k;
  trace.summary.final_psi = trace.records.back().psi;
  trace.summary.final_full_res = trace.records.back().full_res;
  trace.summary.epochs = st.epochs();
  trace.summary.wall_ms = clock.ms();
  trace.summary.newton_accepted = s.accepted_newton_count;
  trace.summary.prox_fallbacks = s.fallback_count;
  trace.x = std::move(s.x);
  return trace;
}

Trace s2nd_run(const CompositeProblem& p, const S4NConfig& cfg, const NewtonConfig& ncfg,
               const IterationObserver& observer) {
  OracleConfig oc;
  const Index N = p.n_points();
  oc.grad_size0 = oc.hess_size0 = oc.grad_cap = oc.hess_cap = N;
  OracleState st(oc, N);
  return s4n_run(p, st, cfg, ncfg, observer);
}

}  // namespace s4n
