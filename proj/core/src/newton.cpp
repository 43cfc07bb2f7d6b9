#include "s4n/newton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s4n {

void NewtonConfig::validate() const {
  if (!(cg_tol0 > 0.0 && cg_tol0 < 1.0)) throw std::invalid_argument("NewtonConfig: cg_tol0 must lie in (0, 1)");
  if (cg_maxit0 < 1 || cg_maxit0 > cg_maxit_total) {
    throw std::invalid_argument("NewtonConfig: need 1 <= cg_maxit0 <= cg_maxit_total");
  }
  if (!(reg_coeff >= 0.0)) throw std::invalid_argument("NewtonConfig: reg_coeff must be >= 0");
}

StepControl adaptive_policy(double res_norm, double res_norm0, const NewtonConfig& cfg) {
  StepControl ctl;
  ctl.tol = std::clamp(res_norm, 1e-8, cfg.cg_tol0);
  int extra = 0;
  if (res_norm > 0.0 && res_norm0 > res_norm) {
    extra = static_cast<int>(std::floor(std::log10(res_norm0 / res_norm)));
  } else if (res_norm == 0.0 && res_norm0 > 0.0) {
    extra = cfg.cg_maxit_total;
  }
  const long maxit = static_cast<long>(cfg.cg_maxit0) + 2L * std::max(0, extra);
  ctl.maxit = static_cast<int>(std::min<long>(cfg.cg_maxit_total, maxit));
  ctl.rho = cfg.reg_coeff * std::min(1.0, res_norm);
  return ctl;
}

NewtonResult newton_step(const Vector& F, const JacobianMask& mask, const LinearOperator& hess, const ProxMetric& metric,
                         const StepControl& ctl, SolverKind kind) {
  const Index n = F.size();
  if (mask.size() != n || hess.dim() != n) throw std::invalid_argument("newton_step: dimension mismatch");
  if (!(ctl.rho >= 0.0)) throw std::invalid_argument("newton_step: rho must be >= 0");

  NewtonResult out;
  out.direction.resize(n);
  const IndexList active = mask.active_indices();
  out.active_count = static_cast<Index>(active.size());

  Vector d_inactive_full = Vector::Zero(n);
  bool coupling = false;
  for (Index i = 0; i < n; ++i) {
    if (!mask.active[static_cast<std::size_t>(i)]) {
      const double di = -F(i) / (1.0 + ctl.rho);
      out.direction(i) = di;
      d_inactive_full(i) = di;
      coupling = coupling || di != 0.0;
    }
  }
  if (active.empty()) return out;

  const double lam = metric.lambda;
  const auto m = static_cast<Index>(active.size());
  Vector rhs(m);
  for (Index a = 0; a < m; ++a) rhs(a) = -F(active[static_cast<std::size_t>(a)]);
  if (coupling) {
    const Vector h_d = hess * d_inactive_full;
    for (Index a = 0; a < m; ++a) rhs(a) -= lam * h_d(active[static_cast<std::size_t>(a)]);
  }

  Vector embed = Vector::Zero(n);
  Vector h_out(n);
  FunctionOperator reduced(m, [&](const Vector& in, Vector& out_a) {
    embed.setZero();
    for (Index a = 0; a < m; ++a) embed(active[static_cast<std::size_t>(a)]) = in(a);
    hess.apply(embed, h_out);
    out_a.resize(m);
    for (Index a = 0; a < m; ++a) out_a(a) = lam * h_out(active[static_cast<std::size_t>(a)]) + ctl.rho * in(a);
  });

  const KrylovResult kr = krylov_solve(reduced, rhs, ctl.tol, ctl.maxit, kind);
  for (Index a = 0; a < m; ++a) out.direction(active[static_cast<std::size_t>(a)]) = kr.solution(a);
  out.iterations = kr.iterations;
  out.rel_residual = kr.rel_residual;
  out.status = kr.status;
  return out;
}

}  // namespace s4n
