#include "s4n/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace s4n {

IndexSampler::IndexSampler(Index population, std::uint64_t seed) : rng_(seed), perm_(static_cast<std::size_t>(population)) {
  if (population < 1) throw std::invalid_argument("IndexSampler: empty population");
  for (Index i = 0; i < population; ++i) perm_[static_cast<std::size_t>(i)] = i;
}

IndexList IndexSampler::draw(Index size) {
  const Index n = population();
  if (size < 1 || size > n) {
    throw std::invalid_argument("sample size " + std::to_string(size) + " outside [1, " + std::to_string(n) + "]");
  }
  if (size == n) {
    IndexList all(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  for (Index i = 0; i < size; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(pick(rng_))]);
  }
  IndexList out(perm_.begin(), perm_.begin() + size);
  std::sort(out.begin(), out.end());
  return out;
}

IndexList sample_without_replacement(Index population, Index size, std::mt19937_64& rng) {
  if (population < 1 || size < 1 || size > population) {
    throw std::invalid_argument("sample_without_replacement: need 1 <= size <= N");
  }
  // Floyd's algorithm: exactly `size` engine-driven draws, uniform over subsets.
  IndexList chosen;
  chosen.reserve(static_cast<std::size_t>(size));
  for (Index j = population - size; j < population; ++j) {
    std::uniform_int_distribution<Index> pick(0, j);
    const Index t = pick(rng);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

OracleState::OracleState(const OracleConfig& c, Index N)
    : cfg(c), n_points(N), grad_size(0), hess_size(0), sampler(N, c.seed) {
  if (cfg.grad_size0 < 1 || cfg.hess_size0 < 1) throw std::invalid_argument("OracleConfig: batch sizes must be >= 1");
  if (cfg.grad_cap < 1 || cfg.hess_cap < 1) throw std::invalid_argument("OracleConfig: caps must be >= 1");
  if (!(cfg.growth_factor >= 1.0)) throw std::invalid_argument("OracleConfig: growth_factor must be >= 1");
  if (cfg.grad_period < 1 || cfg.hess_period < 1) throw std::invalid_argument("OracleConfig: periods must be >= 1");
  if (cfg.vr_enabled && cfg.vr_period < 1) throw std::invalid_argument("OracleConfig: vr_period must be >= 1");
  grad_size = std::min(cfg.grad_size0, grad_limit());
  hess_size = std::min(cfg.hess_size0, hess_limit());
  if (grad_size == grad_limit()) grad_cap_reached_at = 0;
}

double OracleState::epochs() const noexcept {
  const double evals = static_cast<double>(grad_evals) + (cfg.charge_hessian ? static_cast<double>(hess_evals) : 0.0);
  return evals / static_cast<double>(n_points);
}

namespace {

Index grow(Index size, double factor, Index cap) {
  const auto next = static_cast<Index>(std::floor(static_cast<double>(size) * factor));
  return std::min(std::max(next, size + 1), cap);
}

}  // namespace

void advance_schedule(OracleState& st, Index k) {
  if (k <= 0) return;
  const auto& c = st.cfg;
  if (st.grad_size < st.grad_limit() && k % c.grad_period == 0) {
    st.grad_size = grow(st.grad_size, c.growth_factor, st.grad_limit());
    if (st.grad_size == st.grad_limit()) st.grad_cap_reached_at = k;
    return;
  }
  if (c.hess_growth && st.grad_cap_reached_at && k > *st.grad_cap_reached_at && st.hess_size < st.hess_limit() &&
      (k - *st.grad_cap_reached_at) % c.hess_period == 0) {
    st.hess_size = grow(st.hess_size, c.growth_factor, st.hess_limit());
  }
}

IndexList draw_gradient_batch(OracleState& st) { return st.sampler.draw(st.grad_size); }

Vector gradient_on_batch(const CompositeProblem& p, OracleState& st, const Vector& x, IndexSpan batch, Index k) {
  check_subset(p, batch);
  const auto m = static_cast<std::int64_t>(batch.size());
  if (!st.cfg.vr_enabled) {
    st.grad_evals += m;
    return loss_grad(p, x, batch);
  }

  if (k % st.cfg.vr_period == 0 || !st.vr_anchor_valid) {
    st.vr_anchor_x = x;
    st.vr_anchor_grad = full_gradient(p, x);
    st.vr_anchor_valid = true;
    st.grad_evals += p.n_points();
  }

  const auto& rows = p.data().rows();
  const auto& labels = p.data().labels();
  Vector g = Vector::Zero(p.dim());
  for (Index i : batch) {
    const double coef = (margin_loss_d1(p.loss(), p.margin(i, x)) -
                         margin_loss_d1(p.loss(), p.margin(i, st.vr_anchor_x))) * labels(i);
    if (coef == 0.0) continue;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) g(it.col()) += coef * it.value();
  }
  g /= static_cast<double>(batch.size());
  if (p.l2_weight() > 0.0) g += p.l2_weight() * (x - st.vr_anchor_x);
  g += st.vr_anchor_grad;
  st.grad_evals += 2 * m;
  return g;
}

Vector stochastic_gradient(const CompositeProblem& p, OracleState& st, const Vector& x, Index k) {
  const auto batch = draw_gradient_batch(st);
  return gradient_on_batch(p, st, x, batch, k);
}

SubsampledHessian::SubsampledHessian(const CompositeProblem& p, const Vector& x, IndexList batch)
    : p_(&p), batch_(std::move(batch)) {
  check_subset(p, batch_);
  weights_.reserve(batch_.size());
  for (Index i : batch_) weights_.push_back(margin_loss_d2(p.loss(), p.margin(i, x)));
}

void SubsampledHessian::apply(const Vector& in, Vector& out) const {
  const auto& rows = p_->data().rows();
  out.setZero(p_->dim());
  for (std::size_t k = 0; k < batch_.size(); ++k) {
    const Index i = batch_[k];
    double av = 0.0;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) av += it.value() * in(it.col());
    const double coef = weights_[k] * av;
    if (coef == 0.0) continue;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) out(it.col()) += coef * it.value();
  }
  out /= static_cast<double>(batch_.size());
  if (p_->l2_weight() > 0.0) out += p_->l2_weight() * in;
  ++applications_;
}

SubsampledHessian stochastic_hess_operator(const CompositeProblem& p, OracleState& st, const Vector& x) {
  return SubsampledHessian(p, x, st.sampler.draw(st.hess_size));
}

void charge_hessian(OracleState& st, const SubsampledHessian& h) {
  st.hess_evals += h.applications() * static_cast<std::int64_t>(h.batch().size());
}

}  // namespace s4n
