#pragma once

#include <vector>

#include "s4n/types.hpp"

namespace s4n {

/// Scalar prox metric Lambda = (1/lambda) I, so that Lambda^{-1} g = lambda g.
struct ProxMetric {
  explicit ProxMetric(double lambda);
  double lambda;
};

/// Diagonal generalized Jacobian of the l1 prox: active(i) <=> |u_i| > threshold.
struct JacobianMask {
  std::vector<bool> active;

  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(active.size()); }
  [[nodiscard]] Index count() const noexcept;
  [[nodiscard]] IndexList active_indices() const;
  [[nodiscard]] IndexList inactive_indices() const;
};

/// Soft-thresholding sign(u_i) max(|u_i| - threshold, 0).
Vector prox_l1(const Vector& u, double threshold);

/// Soft-thresholding with per-coordinate thresholds.
Vector prox_l1(const Vector& u, const Vector& thresholds);

/// u = x - lambda g, p = prox(u), F = x - p for r = mu ||.||_1 under metric lambda.
struct ResidualParts {
  Vector u;
  Vector p;
  Vector F;
};

ResidualParts residual_parts(const Vector& x, const Vector& g, const ProxMetric& metric, double mu);

inline Vector residual(const Vector& x, const Vector& g, const ProxMetric& metric, double mu) {
  return residual_parts(x, g, metric, mu).F;
}

/// Ties |u_i| == threshold are inactive.
JacobianMask jacobian_mask(const Vector& u, double threshold);

/// ||v||_Lambda = sqrt(<v, v> / lambda).
double scaled_norm(const Vector& v, const ProxMetric& metric);

}  // namespace s4n
