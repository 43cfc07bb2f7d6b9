#pragma once

#include <memory>
#include <string_view>

#include "s4n/dataset.hpp"
#include "s4n/types.hpp"

namespace s4n {

/// Per-sample loss phi(z) of the margin z = b_i <a_i, x>.
///
/// Logistic: log(1 + exp(-z)). Sigmoid: 1 - tanh(z). Squared: (z - 1)^2 / 2,
/// which equals (<a_i, x> - b_i)^2 / 2 for labels in {-1, +1}; it exists for
/// calibration problems with closed-form solutions.
enum class LossKind { Logistic, Sigmoid, Squared };

LossKind parse_loss_kind(std::string_view name);
std::string_view to_string(LossKind kind);

/// phi(z), phi'(z), phi''(z) for each loss kind.
double margin_loss(LossKind kind, double z);
double margin_loss_d1(LossKind kind, double z);
double margin_loss_d2(LossKind kind, double z);

/// psi(x) = f(x) + mu * ||x||_1 with f(x) = (1/N) sum_i phi(b_i <a_i, x>) + (l2/2) ||x||^2.
///
/// The optional ridge term `l2_weight` is carried by every component f_i, so
/// the finite-sum structure (and unbiasedness of sub-sampled estimators) is
/// unaffected.
class CompositeProblem {
 public:
  CompositeProblem(std::shared_ptr<const SparseDataset> data, LossKind loss, double reg_weight, double l2_weight = 0.0);

  [[nodiscard]] const SparseDataset& data() const noexcept { return *data_; }
  [[nodiscard]] const std::shared_ptr<const SparseDataset>& data_ptr() const noexcept { return data_; }
  [[nodiscard]] LossKind loss() const noexcept { return loss_; }
  [[nodiscard]] double reg_weight() const noexcept { return reg_weight_; }
  [[nodiscard]] double l2_weight() const noexcept { return l2_weight_; }
  [[nodiscard]] Index n_points() const noexcept { return data_->n_points(); }
  [[nodiscard]] Index dim() const noexcept { return data_->n_features(); }
  /// 0, 1, ..., N-1.
  [[nodiscard]] IndexSpan all_indices() const noexcept { return all_; }

  /// b_i <a_i, x>.
  [[nodiscard]] double margin(Index i, const Vector& x) const;

 private:
  std::shared_ptr<const SparseDataset> data_;
  LossKind loss_;
  double reg_weight_;
  double l2_weight_;
  IndexList all_;
};

/// (1/|S|) sum_{i in S} f_i(x). Throws on an empty or out-of-range subset.
double loss_value(const CompositeProblem& p, const Vector& x, IndexSpan subset);

/// (1/|S|) sum_{i in S} grad f_i(x).
Vector loss_grad(const CompositeProblem& p, const Vector& x, IndexSpan subset);
void loss_grad(const CompositeProblem& p, const Vector& x, IndexSpan subset, Vector& out);

/// (1/|S|) sum_{i in S} hess f_i(x) v.
Vector loss_hess_vec(const CompositeProblem& p, const Vector& x, IndexSpan subset, const Vector& v);

/// Full-batch loss plus mu * ||x||_1.
double objective(const CompositeProblem& p, const Vector& x);

Vector full_gradient(const CompositeProblem& p, const Vector& x);

/// Upper bound on the gradient Lipschitz constant:
/// c * max_i ||a_i||^2 + l2, with c = sup |phi''| (1/4 logistic, 4/(3 sqrt 3) sigmoid, 1 squared).
double lipschitz_upper_bound(const CompositeProblem& p);

/// Power-iteration estimate of c * lambda_max(A^T A) / N + l2. This is a lower
/// estimate of the tight constant c * ||A||^2 / N and is reported for information.
double lipschitz_power_estimate(const CompositeProblem& p, int iterations = 100);

void check_subset(const CompositeProblem& p, IndexSpan subset);

}  // namespace s4n
