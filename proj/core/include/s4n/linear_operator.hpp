#pragma once

#include <functional>
#include <utility>

#include "s4n/types.hpp"

namespace s4n {

/// Matrix-free square linear operator.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  [[nodiscard]] virtual Index dim() const = 0;
  /// out = A in. `out` is resized by the callee.
  virtual void apply(const Vector& in, Vector& out) const = 0;

  [[nodiscard]] Vector operator*(const Vector& v) const {
    Vector out;
    apply(v, out);
    return out;
  }
};

class FunctionOperator final : public LinearOperator {
 public:
  using Fn = std::function<void(const Vector&, Vector&)>;
  FunctionOperator(Index dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
  [[nodiscard]] Index dim() const override { return dim_; }
  void apply(const Vector& in, Vector& out) const override { fn_(in, out); }

 private:
  Index dim_;
  Fn fn_;
};

/// Wraps a dense (or any Eigen) matrix expression type held by value.
template <class Matrix>
class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(Matrix m) : m_(std::move(m)) {}
  [[nodiscard]] Index dim() const override { return m_.rows(); }
  void apply(const Vector& in, Vector& out) const override { out = m_ * in; }

 private:
  Matrix m_;
};

}  // namespace s4n
