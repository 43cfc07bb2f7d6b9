#include "s4n/krylov.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace s4n {

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "cg" || name == "CG") return SolverKind::CG;
  if (name == "minres" || name == "MINRES") return SolverKind::MINRES;
  throw std::invalid_argument("unknown Krylov solver '" + std::string(name) + "'");
}

std::string_view to_string(SolverKind kind) { return kind == SolverKind::CG ? "cg" : "minres"; }

namespace {

void require_finite(const Vector& v, const char* where) {
  if (!v.allFinite()) throw std::runtime_error(std::string("non-finite value in ") + where);
}

void require_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + where);
}

}  // namespace

KrylovResult krylov_solve(const LinearOperator& A, const Vector& b, double tol, int maxit, SolverKind kind) {
  return kind == SolverKind::CG ? conjugate_gradient(A, b, tol, maxit) : minres(A, b, tol, maxit);
}

KrylovResult conjugate_gradient(const LinearOperator& A, const Vector& b, double tol, int maxit) {
  require_finite(b, "CG right-hand side");
  KrylovResult res;
  res.solution = Vector::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) return res;

  Vector r = b;
  Vector p = r;
  Vector Ap(b.size());
  double rr = r.squaredNorm();
  res.rel_residual = 1.0;
  res.status = KrylovStatus::IterationLimit;

  for (int it = 0; it < maxit; ++it) {
    A.apply(p, Ap);
    require_finite(Ap, "CG operator output");
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      // Nonpositive curvature: keep the current iterate, or the gradient
      // direction if nothing has been accumulated yet.
      if (it == 0) res.solution = b;
      res.status = KrylovStatus::Breakdown;
      return res;
    }
    const double alpha = rr / pAp;
    res.solution += alpha * p;
    r -= alpha * Ap;
    const double rr_next = r.squaredNorm();
    require_finite(rr_next, "CG residual");
    res.iterations = it + 1;
    res.rel_residual = std::sqrt(rr_next) / bnorm;
    if (res.rel_residual <= tol) {
      res.status = KrylovStatus::Converged;
      return res;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return res;
}

// Paige-Saunders MINRES without preconditioning.
KrylovResult minres(const LinearOperator& A, const Vector& b, double tol, int maxit) {
  require_finite(b, "MINRES right-hand side");
  KrylovResult res;
  const Index n = b.size();
  res.solution = Vector::Zero(n);
  const double beta1 = b.norm();
  if (beta1 == 0.0) return res;

  Vector r1 = b, r2 = b, y = b;
  Vector v(n), w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  res.rel_residual = 1.0;
  res.status = KrylovStatus::IterationLimit;

  for (int it = 0; it < maxit; ++it) {
    const double s = 1.0 / beta;
    v = s * y;
    A.apply(v, y);
    require_finite(y, "MINRES operator output");
    if (it > 0) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = y.norm();
    require_finite(beta, "MINRES Lanczos step");

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;

    double gamma = std::hypot(gbar, beta);
    if (gamma == 0.0) {
      res.status = KrylovStatus::Breakdown;
      return res;
    }
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    res.solution += phi * w;
    res.iterations = it + 1;
    res.rel_residual = std::abs(phibar) / beta1;

    if (res.rel_residual <= tol) {
      res.status = KrylovStatus::Converged;
      return res;
    }
    if (beta == 0.0) {
      // Invariant subspace found; the least-squares solution is exact.
      res.status = KrylovStatus::Breakdown;
      return res;
    }
  }
  return res;
}

}  // namespace s4n
