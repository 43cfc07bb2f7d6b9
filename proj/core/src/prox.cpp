#include "s4n/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace s4n {

ProxMetric::ProxMetric(double lam) : lambda(lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw std::invalid_argument("ProxMetric: lambda must be positive and finite");
}

Index JacobianMask::count() const noexcept {
  Index c = 0;
  for (bool a : active) c += a ? 1 : 0;
  return c;
}

IndexList JacobianMask::active_indices() const {
  IndexList idx;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i]) idx.push_back(static_cast<Index>(i));
  return idx;
}

IndexList JacobianMask::inactive_indices() const {
  IndexList idx;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (!active[i]) idx.push_back(static_cast<Index>(i));
  return idx;
}

Vector prox_l1(const Vector& u, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("prox_l1: threshold must be >= 0");
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double a = std::abs(u(i)) - threshold;
    out(i) = a > 0.0 ? std::copysign(a, u(i)) : 0.0;
  }
  return out;
}

Vector prox_l1(const Vector& u, const Vector& thresholds) {
  if (thresholds.size() != u.size()) throw std::invalid_argument("prox_l1: threshold size mismatch");
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    if (!(thresholds(i) >= 0.0)) throw std::invalid_argument("prox_l1: thresholds must be >= 0");
    const double a = std::abs(u(i)) - thresholds(i);
    out(i) = a > 0.0 ? std::copysign(a, u(i)) : 0.0;
  }
  return out;
}

ResidualParts residual_parts(const Vector& x, const Vector& g, const ProxMetric& metric, double mu) {
  ResidualParts parts;
  parts.u = x - metric.lambda * g;
  parts.p = prox_l1(parts.u, mu * metric.lambda);
  parts.F = x - parts.p;
  return parts;
}

JacobianMask jacobian_mask(const Vector& u, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("jacobian_mask: threshold must be >= 0");
  JacobianMask mask;
  mask.active.resize(static_cast<std::size_t>(u.size()));
  for (Index i = 0; i < u.size(); ++i) mask.active[static_cast<std::size_t>(i)] = std::abs(u(i)) > threshold;
  return mask;
}

double scaled_norm(const Vector& v, const ProxMetric& metric) { return std::sqrt(v.squaredNorm() / metric.lambda); }

}  // namespace s4n
