#pragma once

#include <cstddef>
#include <vector>

#include "proxrr/component.hpp"
#include "proxrr/regularizer.hpp"

namespace proxrr {

/// P(x) = (1/n) sum_i f_i(x) + psi(x).
class Problem {
 public:
  /// Throws ArgumentError if `components` is empty, dimensions disagree,
  /// or every component has a zero smoothness constant.
  Problem(std::vector<ComponentPtr> components, Regularizer regularizer);

  std::size_t size() const noexcept { return components_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const Component& component(std::size_t i) const { return *components_[i]; }
  const std::vector<ComponentPtr>& components() const noexcept { return components_; }
  const Regularizer& regularizer() const noexcept { return regularizer_; }

  /// max_i L_i over non-padding components.
  double l_max() const noexcept { return l_max_; }
  /// (1/n) sum_i L_i.
  double l_bar() const noexcept { return l_bar_; }
  /// min_i lambda_i over non-padding components.
  double component_strong_convexity() const noexcept { return lambda_min_; }
  /// Strong-convexity modulus of P: min_i lambda_i + mu(psi).
  double strong_convexity() const noexcept { return lambda_min_ + regularizer_.mu(); }

  /// (1/n) sum_i f_i(x).
  double smooth_value(ConstVecRef x) const;
  /// P(x).
  double objective(ConstVecRef x) const;
  /// grad f(x) = (1/n) sum_i grad f_i(x).
  void full_gradient(ConstVecRef x, VecRef out) const;
  Vec full_gradient(ConstVecRef x) const;

 private:
  std::vector<ComponentPtr> components_;
  Regularizer regularizer_;
  std::size_t dim_ = 0;
  double l_max_ = 0.0;
  double l_bar_ = 0.0;
  double lambda_min_ = 0.0;
};

}  // namespace proxrr
