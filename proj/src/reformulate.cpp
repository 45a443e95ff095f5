#include "proxrr/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "proxrr/errors.hpp"
#include "proxrr/losses.hpp"
#include "proxrr/prox.hpp"

namespace proxrr {

std::vector<std::size_t> resampling_counts(const std::vector<double>& smoothness) {
  if (smoothness.empty()) throw ArgumentError("importance_resample: no components");
  double sum = 0.0;
  for (const double l : smoothness) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ArgumentError("importance_resample: every L_i must be positive");
    sum += l;
  }
  const double l_bar = sum / static_cast<double>(smoothness.size());
  std::vector<std::size_t> counts;
  counts.reserve(smoothness.size());
  for (const double l : smoothness) {
    // Smallest n_i with n_i * L_bar >= L_i as evaluated in floating point, so
    // that equal constants never round up to two copies.
    auto c = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l / l_bar)));
    while (c > 1 && static_cast<double>(c - 1) * l_bar >= l) --c;
    while (static_cast<double>(c) * l_bar < l) ++c;
    counts.push_back(c);
  }
  return counts;
}

ResampledProblem importance_resample(const Problem& problem) {
  std::vector<double> ls;
  ls.reserve(problem.size());
  for (const auto& c : problem.components()) ls.push_back(c->smoothness());
  std::vector<std::size_t> counts = resampling_counts(ls);

  std::size_t total = 0;
  for (const std::size_t c : counts) total += c;
  const double ratio = static_cast<double>(total) / static_cast<double>(problem.size());

  std::vector<ComponentPtr> expanded;
  std::vector<std::size_t> origin;
  expanded.reserve(total);
  origin.reserve(total);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double factor = ratio / static_cast<double>(counts[i]);
    auto copy = factor == 1.0 ? problem.components()[i]
                              : std::make_shared<const ScaledComponent>(problem.components()[i], factor);
    for (std::size_t k = 0; k < counts[i]; ++k) {
      expanded.push_back(copy);
      origin.push_back(i);
    }
  }
  return ResampledProblem{Problem(std::move(expanded), problem.regularizer()), std::move(counts),
                          std::move(origin), total};
}

StackedComponent::StackedComponent(std::vector<ComponentPtr> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ArgumentError("StackedComponent: no blocks");
  block_dim_ = blocks_.front()->dim();
  for (const auto& b : blocks_) {
    if (!b || b->dim() != block_dim_) throw ArgumentError("StackedComponent: block dimensions disagree");
  }
}

double StackedComponent::value(ConstVecRef x) const {
  const auto d = static_cast<Eigen::Index>(block_dim_);
  double sum = 0.0;
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    sum += blocks_[m]->value(x.segment(static_cast<Eigen::Index>(m) * d, d));
  }
  return sum;
}

void StackedComponent::gradient(ConstVecRef x, VecRef out) const {
  const auto d = static_cast<Eigen::Index>(block_dim_);
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    const auto off = static_cast<Eigen::Index>(m) * d;
    blocks_[m]->gradient(x.segment(off, d), out.segment(off, d));
  }
}

void StackedComponent::add_gradient(double alpha, ConstVecRef x, VecRef y) const {
  const auto d = static_cast<Eigen::Index>(block_dim_);
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    const auto off = static_cast<Eigen::Index>(m) * d;
    blocks_[m]->add_gradient(alpha, x.segment(off, d), y.segment(off, d));
  }
}

double StackedComponent::smoothness() const {
  double l = 0.0;
  for (const auto& b : blocks_) l = std::max(l, b->smoothness());
  return l;
}

double StackedComponent::strong_convexity() const {
  double lambda = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) lambda = std::min(lambda, b->strong_convexity());
  return lambda;
}

bool StackedComponent::is_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b->is_zero(); });
}

FederatedProblem::FederatedProblem(std::vector<std::vector<ComponentPtr>> clients, Regularizer R,
                                   std::optional<std::size_t> n_override)
    : padded_(std::move(clients)), R_(std::move(R)) {
  if (padded_.empty()) throw ArgumentError("build_federated: no clients");
  for (const auto& c : padded_) {
    if (c.empty()) throw ArgumentError("build_federated: empty client");
    n_ = std::max(n_, c.size());
  }
  if (n_override) {
    if (*n_override < n_) throw ArgumentError("build_federated: n_override smaller than largest client");
    n_ = *n_override;
  }
  dim_ = padded_.front().front()->dim();
  for (auto& c : padded_) {
    sizes_.push_back(c.size());
    total_ += c.size();
    for (const auto& f : c) {
      if (!f || f->dim() != dim_) throw ArgumentError("build_federated: component dimensions disagree");
      if (!f->is_zero()) l_max_ = std::max(l_max_, f->smoothness());
    }
    const auto pad = std::make_shared<const ZeroComponent>(dim_);
    c.resize(n_, pad);
  }
}

Problem FederatedProblem::pooled_problem() const {
  std::vector<ComponentPtr> all;
  all.reserve(total_);
  for (std::size_t m = 0; m < padded_.size(); ++m) {
    all.insert(all.end(), padded_[m].begin(), padded_[m].begin() + static_cast<std::ptrdiff_t>(sizes_[m]));
  }
  return Problem(std::move(all), R_);
}

Problem FederatedProblem::client_problem(std::size_t m) const {
  std::vector<ComponentPtr> own(padded_[m].begin(), padded_[m].begin() + static_cast<std::ptrdiff_t>(sizes_[m]));
  return Problem(std::move(own), R_);
}

Problem FederatedProblem::stacked_problem() const {
  std::vector<ComponentPtr> slots;
  slots.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::vector<ComponentPtr> blocks;
    blocks.reserve(padded_.size());
    for (const auto& c : padded_) blocks.push_back(c[i]);
    slots.push_back(std::make_shared<const StackedComponent>(std::move(blocks)));
  }
  const double scale = static_cast<double>(total_) / static_cast<double>(n_);
  Regularizer psi = consensus_regularizer(R_, padded_.size(), dim_);
  return Problem(std::move(slots), scale == 1.0 ? std::move(psi) : psi.scaled(scale));
}

Vec FederatedProblem::replicate(ConstVecRef x) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Vec out(d * static_cast<Eigen::Index>(padded_.size()));
  for (std::size_t m = 0; m < padded_.size(); ++m) out.segment(static_cast<Eigen::Index>(m) * d, d) = x;
  return out;
}

FederatedProblem build_federated(std::vector<std::vector<ComponentPtr>> clients, Regularizer R,
                                 std::optional<std::size_t> n_override) {
  return FederatedProblem(std::move(clients), std::move(R), n_override);
}

}  // namespace proxrr
