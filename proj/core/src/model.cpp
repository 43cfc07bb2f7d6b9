#include "s4n/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace s4n {

LossKind parse_loss_kind(std::string_view name) {
  if (name == "logistic") return LossKind::Logistic;
  if (name == "sigmoid") return LossKind::Sigmoid;
  if (name == "squared") return LossKind::Squared;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Logistic: return "logistic";
    case LossKind::Sigmoid: return "sigmoid";
    case LossKind::Squared: return "squared";
  }
  return "?";
}

namespace {

// sigma(t) = 1 / (1 + exp(-t)) without overflow.
double logistic_sigma(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double margin_loss(LossKind kind, double z) {
  switch (kind) {
    case LossKind::Logistic:
      // softplus(-z)
      return z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    case LossKind::Sigmoid: return 1.0 - std::tanh(z);
    case LossKind::Squared: return 0.5 * (z - 1.0) * (z - 1.0);
  }
  return 0.0;
}

double margin_loss_d1(LossKind kind, double z) {
  switch (kind) {
    case LossKind::Logistic: return -logistic_sigma(-z);
    case LossKind::Sigmoid: {
      const double t = std::tanh(z);
      return -(1.0 - t * t);
    }
    case LossKind::Squared: return z - 1.0;
  }
  return 0.0;
}

double margin_loss_d2(LossKind kind, double z) {
  switch (kind) {
    case LossKind::Logistic: {
      const double s = logistic_sigma(z);
      return s * (1.0 - s);
    }
    case LossKind::Sigmoid: {
      const double t = std::tanh(z);
      return 2.0 * t * (1.0 - t * t);
    }
    case LossKind::Squared: return 1.0;
  }
  return 0.0;
}

CompositeProblem::CompositeProblem(std::shared_ptr<const SparseDataset> data, LossKind loss, double reg_weight,
                                   double l2_weight)
    : data_(std::move(data)), loss_(loss), reg_weight_(reg_weight), l2_weight_(l2_weight) {
  if (!data_) throw std::invalid_argument("CompositeProblem: null dataset");
  if (!(reg_weight_ >= 0.0)) throw std::invalid_argument("CompositeProblem: reg_weight must be >= 0");
  if (!(l2_weight_ >= 0.0)) throw std::invalid_argument("CompositeProblem: l2_weight must be >= 0");
  all_.resize(static_cast<std::size_t>(data_->n_points()));
  for (Index i = 0; i < data_->n_points(); ++i) all_[static_cast<std::size_t>(i)] = i;
}

double CompositeProblem::margin(Index i, const Vector& x) const {
  double dot = 0.0;
  for (SparseRows::InnerIterator it(data_->rows(), i); it; ++it) dot += it.value() * x(it.col());
  return data_->labels()(i) * dot;
}

void check_subset(const CompositeProblem& p, IndexSpan subset) {
  if (subset.empty()) throw std::invalid_argument("empty index subset");
  for (Index i : subset) {
    if (i < 0 || i >= p.n_points()) throw std::out_of_range("subset index " + std::to_string(i) + " out of range");
  }
}

double loss_value(const CompositeProblem& p, const Vector& x, IndexSpan subset) {
  check_subset(p, subset);
  double sum = 0.0;
  for (Index i : subset) sum += margin_loss(p.loss(), p.margin(i, x));
  double value = sum / static_cast<double>(subset.size());
  if (p.l2_weight() > 0.0) value += 0.5 * p.l2_weight() * x.squaredNorm();
  return value;
}

void loss_grad(const CompositeProblem& p, const Vector& x, IndexSpan subset, Vector& out) {
  check_subset(p, subset);
  const auto& rows = p.data().rows();
  const auto& labels = p.data().labels();
  out.setZero(p.dim());
  for (Index i : subset) {
    const double coef = margin_loss_d1(p.loss(), p.margin(i, x)) * labels(i);
    for (SparseRows::InnerIterator it(rows, i); it; ++it) out(it.col()) += coef * it.value();
  }
  out /= static_cast<double>(subset.size());
  if (p.l2_weight() > 0.0) out += p.l2_weight() * x;
}

Vector loss_grad(const CompositeProblem& p, const Vector& x, IndexSpan subset) {
  Vector g;
  loss_grad(p, x, subset, g);
  return g;
}

Vector loss_hess_vec(const CompositeProblem& p, const Vector& x, IndexSpan subset, const Vector& v) {
  check_subset(p, subset);
  const auto& rows = p.data().rows();
  Vector out = Vector::Zero(p.dim());
  for (Index i : subset) {
    const double w = margin_loss_d2(p.loss(), p.margin(i, x));
    double av = 0.0;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) av += it.value() * v(it.col());
    const double coef = w * av;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) out(it.col()) += coef * it.value();
  }
  out /= static_cast<double>(subset.size());
  if (p.l2_weight() > 0.0) out += p.l2_weight() * v;
  return out;
}

double objective(const CompositeProblem& p, const Vector& x) {
  return loss_value(p, x, p.all_indices()) + p.reg_weight() * x.lpNorm<1>();
}

Vector full_gradient(const CompositeProblem& p, const Vector& x) { return loss_grad(p, x, p.all_indices()); }

namespace {

double curvature_sup(LossKind kind) {
  switch (kind) {
    case LossKind::Logistic: return 0.25;
    case LossKind::Sigmoid: return 4.0 / (3.0 * std::sqrt(3.0));
    case LossKind::Squared: return 1.0;
  }
  return 1.0;
}

}  // namespace

double lipschitz_upper_bound(const CompositeProblem& p) {
  double max_row = 0.0;
  for (Index i = 0; i < p.n_points(); ++i) max_row = std::max(max_row, p.data().rows().row(i).squaredNorm());
  return curvature_sup(p.loss()) * max_row + p.l2_weight();
}

double lipschitz_power_estimate(const CompositeProblem& p, int iterations) {
  const auto& A = p.data().rows();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Vector v(p.dim());
  for (Index j = 0; j < v.size(); ++j) v(j) = gauss(rng);
  double lam = 0.0;
  for (int it = 0; it < iterations && v.norm() > 0.0; ++it) {
    v.normalize();
    Vector w = A.transpose() * (A * v);
    lam = v.dot(w);
    v = w;
  }
  return curvature_sup(p.loss()) * lam / static_cast<double>(p.n_points()) + p.l2_weight();
}

}  // namespace s4n
