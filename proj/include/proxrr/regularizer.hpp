#pragma once

#include <functional>
#include <string>

#include "proxrr/vector.hpp"

namespace proxrr {

/// Proper closed convex regularizer psi, accessed through its proximal map.
///
/// `prox(x, s)` computes prox_{s psi}(x) = argmin_z { s psi(z) + |z - x|^2 / 2 }.
/// The scale is always supplied by the caller: ProxRR passes gamma_t * n.
class Regularizer {
 public:
  using ProxFn = std::function<void(ConstVecRef x, double scale, VecRef out)>;
  using ValueFn = std::function<double(ConstVecRef x)>;

  Regularizer(ProxFn prox, ValueFn value, double mu, std::string name);

  /// psi = 0.
  static Regularizer zero();
  /// psi = l1 |x|_1 + (l2 / 2) |x|^2.
  static Regularizer elastic_net(double l1, double l2);
  static Regularizer l1(double l1) { return elastic_net(l1, 0.0); }
  static Regularizer ridge(double l2) { return elastic_net(0.0, l2); }

  /// c * psi for c > 0.
  Regularizer scaled(double c) const;

  /// out = prox_{scale psi}(x); `out` may alias `x`.
  void prox(ConstVecRef x, double scale, VecRef out) const;
  Vec prox(ConstVecRef x, double scale) const;

  double value(ConstVecRef x) const { return value_(x); }
  double mu() const noexcept { return mu_; }
  const std::string& name() const noexcept { return name_; }
  bool is_zero() const noexcept { return zero_; }

 private:
  ProxFn prox_;
  ValueFn value_;
  double mu_;
  std::string name_;
  bool zero_ = false;
};

}  // namespace proxrr
