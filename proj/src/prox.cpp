#include "proxrr/prox.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "proxrr/errors.hpp"

namespace proxrr {

void prox_l1(ConstVecRef x, double threshold, VecRef out) {
  if (!(threshold > 0.0)) throw ArgumentError("prox_l1: threshold must be positive");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double v = x[j];
    const double a = std::abs(v);
    out[j] = a >= threshold ? std::copysign(a - threshold, v) : 0.0;
  }
}

Vec prox_l1(ConstVecRef x, double threshold) {
  Vec out(x.size());
  prox_l1(x, threshold, out);
  return out;
}

void prox_elastic_net(ConstVecRef x, double gamma, double l1, double l2, VecRef out) {
  if (!(gamma > 0.0)) throw ArgumentError("prox_elastic_net: gamma must be positive");
  if (l1 < 0.0 || l2 < 0.0) throw ArgumentError("prox_elastic_net: negative coefficient");
  if (l1 > 0.0) {
    prox_l1(x, gamma * l1, out);
  } else {
    out = x;
  }
  if (l2 > 0.0) out /= (1.0 + gamma * l2);
}

Vec prox_elastic_net(ConstVecRef x, double gamma, double l1, double l2) {
  Vec out(x.size());
  prox_elastic_net(x, gamma, l1, l2, out);
  return out;
}

namespace {

Vec pairwise_sum(std::span<const Vec> blocks) {
  if (blocks.size() == 1) return blocks.front();
  const std::size_t half = blocks.size() / 2;
  Vec left = pairwise_sum(blocks.first(half));
  left += pairwise_sum(blocks.subspan(half));
  return left;
}

}  // namespace

Vec pairwise_mean(std::span<const Vec> blocks) {
  if (blocks.empty()) throw ArgumentError("pairwise_mean: no blocks");
  const auto d = blocks.front().size();
  for (const auto& b : blocks) {
    if (b.size() != d) throw ArgumentError("pairwise_mean: block sizes disagree");
  }
  Vec sum = pairwise_sum(blocks);
  sum /= static_cast<double>(blocks.size());
  return sum;
}

Vec prox_consensus_plus_R(std::span<const Vec> blocks, double gamma, const Regularizer& R) {
  if (blocks.empty()) throw ArgumentError("prox_consensus_plus_R: empty block list");
  Vec mean = pairwise_mean(blocks);
  R.prox(mean, gamma / static_cast<double>(blocks.size()), mean);
  return mean;
}

Regularizer consensus_regularizer(const Regularizer& R, std::size_t num_blocks, std::size_t block_dim) {
  if (num_blocks == 0 || block_dim == 0) throw ArgumentError("consensus_regularizer: empty shape");
  const auto m = static_cast<Eigen::Index>(num_blocks);
  const auto d = static_cast<Eigen::Index>(block_dim);

  auto prox = [R, m, d](ConstVecRef x, double scale, VecRef out) {
    if (x.size() != m * d) throw ArgumentError("consensus prox: dimension mismatch");
    std::vector<Vec> blocks;
    blocks.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index b = 0; b < m; ++b) blocks.emplace_back(x.segment(b * d, d));
    const Vec shared = prox_consensus_plus_R(blocks, scale, R);
    for (Eigen::Index b = 0; b < m; ++b) out.segment(b * d, d) = shared;
  };
  auto value = [R, m, d](ConstVecRef x) {
    const auto first = x.head(d);
    for (Eigen::Index b = 1; b < m; ++b) {
      if (x.segment(b * d, d) != first) return std::numeric_limits<double>::infinity();
    }
    return R.value(first);
  };
  // On the consensus set |x|^2 = M |x_1|^2, so mu(R)/M is the modulus in the stacked norm.
  return Regularizer(std::move(prox), std::move(value), R.mu() / static_cast<double>(num_blocks),
                     "consensus(" + R.name() + ")");
}

}  // namespace proxrr
