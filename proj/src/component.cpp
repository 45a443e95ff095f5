#include "proxrr/component.hpp"

#include "proxrr/errors.hpp"

namespace proxrr {

void Component::add_gradient(double alpha, ConstVecRef x, VecRef y) const {
  Vec g(dim());
  gradient(x, g);
  y += alpha * g;
}

Vec Component::gradient(ConstVecRef x) const {
  Vec g(dim());
  gradient(x, g);
  return g;
}

double bregman_div(const Component& f, ConstVecRef x, ConstVecRef y) {
  if (static_cast<std::size_t>(x.size()) != f.dim() || static_cast<std::size_t>(y.size()) != f.dim()) {
    throw ArgumentError("bregman_div: dimension mismatch");
  }
  const Vec gy = f.gradient(y);
  return f.value(x) - f.value(y) - gy.dot(x - y);
}

}  // namespace proxrr
