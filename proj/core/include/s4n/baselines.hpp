#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "s4n/driver.hpp"
#include "s4n/model.hpp"
#include "s4n/trace.hpp"

namespace s4n {

/// Common stopping and recording controls.
struct RunControl {
  Index max_iters = 1000;
  double max_epochs = std::numeric_limits<double>::infinity();
  double stop_tol = 1e-8;
  Index check_every = 10;
  bool charge_termination = false;
  /// Starting point; empty means zero.
  Vector x0;

  void validate() const;
};

struct AdagradConfig {
  /// lambda in Lambda_k = lambda^{-1} diag(delta + sqrt(G_k)).
  double step_scale = 1.0;
  double delta = 1e-7;
  /// Batch size; 0 means floor(batch_fraction * N), at least 1.
  Index batch_size = 0;
  double batch_fraction = 0.05;
  std::uint64_t seed = 0;
  RunControl control;

  void validate() const;
};

struct AdagradState {
  /// Running sum of squared gradient estimates.
  Vector accum;
  double delta = 1e-7;
  double step_scale = 1.0;
  Index batch_size = 1;
};

/// Soft-thresholding of u with per-coordinate thresholds mu*lambda/(delta + sqrt(G_i)).
Vector adagrad_prox(const Vector& u, const Vector& accum, double delta, double step_scale, double mu);

Trace adagrad_run(const CompositeProblem& p, const AdagradConfig& cfg);

struct ProxSvrgConfig {
  /// 0 means floor(batch_fraction * N), at least 1.
  Index batch_size = 0;
  double batch_fraction = 0.01;
  Index inner_period = 10;
  double lambda0 = 0.1;
  double lambda_min = 1e-3;
  double lambda_max = 1e4;
  S4NConfig::LambdaAverage lambda_average = S4NConfig::LambdaAverage::Running;
  double lambda_ema = 0.5;
  bool adapt_lambda = true;
  std::uint64_t seed = 0;
  RunControl control;

  void validate() const;
};

Trace proxsvrg_run(const CompositeProblem& p, const ProxSvrgConfig& cfg);

/// {i * 10^j : i = 1..9, j = -2..1}.
std::vector<double> adagrad_step_grid();

}  // namespace s4n
