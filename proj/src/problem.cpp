#include "proxrr/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxrr/errors.hpp"

namespace proxrr {

Problem::Problem(std::vector<ComponentPtr> components, Regularizer regularizer)
    : components_(std::move(components)), regularizer_(std::move(regularizer)) {
  if (components_.empty()) throw ArgumentError("Problem: no components");
  dim_ = components_.front()->dim();
  if (dim_ == 0) throw ArgumentError("Problem: dimension must be positive");

  double l_sum = 0.0;
  lambda_min_ = std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    if (!c) throw ArgumentError("Problem: null component");
    if (c->dim() != dim_) throw ArgumentError("Problem: component dimensions disagree");
    l_sum += c->smoothness();
    if (c->is_zero()) continue;
    l_max_ = std::max(l_max_, c->smoothness());
    lambda_min_ = std::min(lambda_min_, c->strong_convexity());
  }
  if (!(l_max_ > 0.0) || !std::isfinite(l_max_)) {
    throw ArgumentError("Problem: L_max must be finite and positive");
  }
  l_bar_ = l_sum / static_cast<double>(components_.size());
}

double Problem::smooth_value(ConstVecRef x) const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c->value(x);
  return sum / static_cast<double>(components_.size());
}

double Problem::objective(ConstVecRef x) const {
  return smooth_value(x) + regularizer_.value(x);
}

void Problem::full_gradient(ConstVecRef x, VecRef out) const {
  out.setZero();
  for (const auto& c : components_) c->add_gradient(1.0, x, out);
  out /= static_cast<double>(components_.size());
}

Vec Problem::full_gradient(ConstVecRef x) const {
  Vec g(dim_);
  full_gradient(x, g);
  return g;
}

}  // namespace proxrr
