#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "s4n/linear_operator.hpp"
#include "s4n/model.hpp"

namespace s4n {

/// Uniform sampling without replacement from {0, ..., N-1}.
///
/// Keeps a persistent permutation buffer and performs a partial Fisher-Yates
/// shuffle per draw, so a draw of size m costs O(m) plus the sort.
class IndexSampler {
 public:
  IndexSampler(Index population, std::uint64_t seed);

  /// `size` distinct indices in increasing order. size == N returns 0..N-1
  /// without consuming randomness.
  IndexList draw(Index size);

  [[nodiscard]] Index population() const noexcept { return static_cast<Index>(perm_.size()); }
  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
  IndexList perm_;
};

/// Free-function form used by tests: draws from `rng` directly.
IndexList sample_without_replacement(Index population, Index size, std::mt19937_64& rng);

struct OracleConfig {
  Index grad_size0 = 1;
  Index hess_size0 = 1;
  Index grad_cap = 1;
  Index hess_cap = 1;
  double growth_factor = 3.375;
  Index grad_period = 30;
  Index hess_period = 15;
  bool hess_growth = true;
  bool vr_enabled = false;
  Index vr_period = 6;
  /// Charge |T|/N epochs per Hessian-vector product over batch T.
  bool charge_hessian = true;
  std::uint64_t seed = 0;
};

/// Mutable sampling state owned by exactly one run.
struct OracleState {
  OracleState(const OracleConfig& cfg, Index n_points);

  OracleConfig cfg;
  Index n_points;
  Index grad_size;
  Index hess_size;
  /// Iteration at which grad_size first equalled min(grad_cap, N).
  std::optional<Index> grad_cap_reached_at;

  Vector vr_anchor_x;
  Vector vr_anchor_grad;
  bool vr_anchor_valid = false;

  IndexSampler sampler;

  /// Component-gradient evaluations (including full passes for anchors).
  std::int64_t grad_evals = 0;
  /// Component Hessian-vector evaluations, sum of |T| over applications.
  std::int64_t hess_evals = 0;

  [[nodiscard]] Index grad_limit() const noexcept { return std::min(cfg.grad_cap, n_points); }
  [[nodiscard]] Index hess_limit() const noexcept { return std::min(cfg.hess_cap, n_points); }
  [[nodiscard]] double epochs() const noexcept;
};

/// Staged geometric growth for iteration k >= 1: the gradient batch grows by
/// `growth_factor` every `grad_period` iterations up to its cap; once the cap
/// is reached, the Hessian batch grows every `hess_period` iterations.
void advance_schedule(OracleState& st, Index k);

/// Draw a gradient batch of the current size.
IndexList draw_gradient_batch(OracleState& st);

/// Gradient estimate at x over `batch` for iteration index k. In VR mode the
/// anchor is refreshed to x when k mod m == 0 (one full pass), and the
/// control-variate estimator is returned.
Vector gradient_on_batch(const CompositeProblem& p, OracleState& st, const Vector& x, IndexSpan batch, Index k);

/// Fresh batch plus gradient_on_batch.
Vector stochastic_gradient(const CompositeProblem& p, OracleState& st, const Vector& x, Index k);

/// v -> (1/|T|) sum_{j in T} hess f_j(x) v with the batch and curvature weights
/// frozen at construction.
class SubsampledHessian final : public LinearOperator {
 public:
  SubsampledHessian(const CompositeProblem& p, const Vector& x, IndexList batch);

  [[nodiscard]] Index dim() const override { return p_->dim(); }
  void apply(const Vector& in, Vector& out) const override;

  [[nodiscard]] const IndexList& batch() const noexcept { return batch_; }
  [[nodiscard]] std::int64_t applications() const noexcept { return applications_; }

 private:
  const CompositeProblem* p_;
  IndexList batch_;
  std::vector<double> weights_;
  mutable std::int64_t applications_ = 0;
};

SubsampledHessian stochastic_hess_operator(const CompositeProblem& p, OracleState& st, const Vector& x);

/// Charge the applications made so far by `h` to the epoch counter.
void charge_hessian(OracleState& st, const SubsampledHessian& h);

}  // namespace s4n
