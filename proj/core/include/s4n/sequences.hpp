#pragma once

#include <cmath>

namespace s4n {

/// k -> coeff * k^(-exponent). Evaluated at k = 0 this is +inf for exponent > 0.
struct PowerRule {
  double coeff = 0.0;
  double exponent = 1.0;

  [[nodiscard]] double operator()(double k) const { return coeff == 0.0 ? 0.0 : coeff * std::pow(k, -exponent); }

  /// sum_k (coeff k^-exponent)^q < inf over k >= 1.
  [[nodiscard]] bool summable(double q = 1.0) const { return coeff == 0.0 || exponent * q > 1.0; }
};

}  // namespace s4n
