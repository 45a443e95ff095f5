#include "proxrr/regularizer.hpp"

#include <sstream>

#include "proxrr/errors.hpp"
#include "proxrr/prox.hpp"

namespace proxrr {

Regularizer::Regularizer(ProxFn prox, ValueFn value, double mu, std::string name)
    : prox_(std::move(prox)), value_(std::move(value)), mu_(mu), name_(std::move(name)) {
  if (!prox_ || !value_) throw ArgumentError("Regularizer: missing prox or value");
  if (mu_ < 0.0) throw ArgumentError("Regularizer: negative strong convexity");
}

Regularizer Regularizer::zero() {
  Regularizer r([](ConstVecRef x, double, VecRef out) { out = x; }, [](ConstVecRef) { return 0.0; }, 0.0,
                "zero");
  r.zero_ = true;
  return r;
}

Regularizer Regularizer::elastic_net(double l1, double l2) {
  if (l1 < 0.0 || l2 < 0.0) throw ArgumentError("elastic_net: negative coefficient");
  if (l1 == 0.0 && l2 == 0.0) return zero();
  std::ostringstream name;
  name.precision(17);
  name << "elastic_net(l1=" << l1 << ",l2=" << l2 << ")";
  return Regularizer(
      [l1, l2](ConstVecRef x, double scale, VecRef out) { prox_elastic_net(x, scale, l1, l2, out); },
      [l1, l2](ConstVecRef x) { return l1 * x.lpNorm<1>() + 0.5 * l2 * x.squaredNorm(); }, l2, name.str());
}

Regularizer Regularizer::scaled(double c) const {
  if (!(c > 0.0)) throw ArgumentError("Regularizer::scaled: factor must be positive");
  if (zero_) return *this;
  std::ostringstream name;
  name.precision(17);
  name << c << "*" << name_;
  auto base_prox = prox_;
  auto base_value = value_;
  return Regularizer([base_prox, c](ConstVecRef x, double scale, VecRef out) { base_prox(x, c * scale, out); },
                     [base_value, c](ConstVecRef x) { return c * base_value(x); }, c * mu_, name.str());
}

void Regularizer::prox(ConstVecRef x, double scale, VecRef out) const {
  if (!(scale > 0.0)) throw ArgumentError("Regularizer::prox: scale must be positive");
  prox_(x, scale, out);
}

Vec Regularizer::prox(ConstVecRef x, double scale) const {
  Vec out(x.size());
  prox(x, scale, out);
  return out;
}

}  // namespace proxrr
