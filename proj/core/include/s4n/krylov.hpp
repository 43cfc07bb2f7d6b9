#pragma once

#include <string_view>

#include "s4n/linear_operator.hpp"

namespace s4n {

enum class SolverKind { CG, MINRES };

SolverKind parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);

enum class KrylovStatus {
  Converged,          ///< relative residual <= tol (includes rhs == 0)
  IterationLimit,     ///< maxit reached
  Breakdown,          ///< nonpositive curvature in CG or a vanishing Lanczos step
};

struct KrylovResult {
  Vector solution;
  int iterations = 0;
  /// ||b - A x|| / ||b|| as tracked by the recurrence.
  double rel_residual = 0.0;
  KrylovStatus status = KrylovStatus::Converged;
};

/// Early-terminated solve of A x = b for symmetric A, x0 = 0. Stops when the
/// relative residual drops to `tol` or after `maxit` iterations. Throws
/// std::runtime_error on NaN/Inf.
KrylovResult krylov_solve(const LinearOperator& A, const Vector& b, double tol, int maxit, SolverKind kind);

KrylovResult conjugate_gradient(const LinearOperator& A, const Vector& b, double tol, int maxit);
KrylovResult minres(const LinearOperator& A, const Vector& b, double tol, int maxit);

}  // namespace s4n
