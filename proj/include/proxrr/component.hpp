#pragma once

#include <cstddef>
#include <memory>

#include "proxrr/vector.hpp"

namespace proxrr {

/// A smooth convex summand f_i of the finite-sum objective.
///
/// Implementations are immutable after construction and may be shared
/// between problems and threads.
class Component {
 public:
  virtual ~Component() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(ConstVecRef x) const = 0;
  virtual void gradient(ConstVecRef x, VecRef out) const = 0;

  /// y += alpha * grad f(x). `x` and `y` may refer to the same storage;
  /// the gradient is always evaluated at the value of x before the update.
  virtual void add_gradient(double alpha, ConstVecRef x, VecRef y) const;

  /// Smoothness constant L_i.
  virtual double smoothness() const = 0;
  /// Strong-convexity constant lambda_i (0 if merely convex).
  virtual double strong_convexity() const = 0;
  /// True for the identically-zero padding component.
  virtual bool is_zero() const { return false; }

  Vec gradient(ConstVecRef x) const;
};

using ComponentPtr = std::shared_ptr<const Component>;

/// Bregman divergence D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>.
/// Throws ArgumentError on dimension mismatch.
double bregman_div(const Component& f, ConstVecRef x, ConstVecRef y);

}  // namespace proxrr
