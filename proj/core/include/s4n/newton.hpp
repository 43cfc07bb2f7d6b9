#pragma once

#include "s4n/krylov.hpp"
#include "s4n/prox.hpp"

namespace s4n {

struct NewtonConfig {
  double cg_tol0 = 0.01;
  int cg_maxit0 = 2;
  int cg_maxit_total = 12;
  /// rho_k = reg_coeff * min(1, ||F||).
  double reg_coeff = 1.0;
  SolverKind solver = SolverKind::CG;

  void validate() const;
};

/// Accuracy and regularization for one Newton solve.
struct StepControl {
  double tol = 0.01;
  int maxit = 2;
  double rho = 0.0;
};

/// tol = clamp(||F||, 1e-8, cg_tol0);
/// maxit = min(total, maxit0 + 2 * max(0, floor(log10(||F_0|| / ||F||))));
/// rho = reg_coeff * min(1, ||F||).
StepControl adaptive_policy(double res_norm, double res_norm0, const NewtonConfig& cfg);

struct NewtonResult {
  Vector direction;
  int iterations = 0;
  double rel_residual = 0.0;
  KrylovStatus status = KrylovStatus::Converged;
  Index active_count = 0;
};

/// Solves (M + rho I) d = -F with M = (I - D) + lambda D H through the
/// symmetric reduced system on the active set A = {i : mask_i = 1}:
///
///   d_I = -F_I / (1 + rho),
///   (lambda H_AA + rho I) d_A = -F_A - lambda H_AI d_I.
///
/// `hess` is applied once for the coupling term (only if d_I != 0) plus once
/// per Krylov iteration.
NewtonResult newton_step(const Vector& F, const JacobianMask& mask, const LinearOperator& hess, const ProxMetric& metric,
                         const StepControl& ctl, SolverKind kind);

}  // namespace s4n
