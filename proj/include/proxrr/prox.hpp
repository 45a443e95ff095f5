#pragma once

#include <span>

#include "proxrr/regularizer.hpp"
#include "proxrr/vector.hpp"

namespace proxrr {

/// Coordinatewise soft threshold: sign(x_j)(|x_j| - t) if |x_j| >= t, else 0.
/// Throws ArgumentError unless threshold > 0.
Vec prox_l1(ConstVecRef x, double threshold);
void prox_l1(ConstVecRef x, double threshold, VecRef out);

/// prox of gamma (l1 |.|_1 + l2/2 |.|^2): soft threshold at gamma*l1, then
/// divide by 1 + gamma*l2.
Vec prox_elastic_net(ConstVecRef x, double gamma, double l1, double l2);
void prox_elastic_net(ConstVecRef x, double gamma, double l1, double l2, VecRef out);

/// Shared block of prox_{gamma (R + psi_C)}(x_1, ..., x_M) where psi_C is the
/// indicator of {x_1 = ... = x_M}: prox_{(gamma/M) R}(mean of blocks).
/// The caller replicates the result into every block.
Vec prox_consensus_plus_R(std::span<const Vec> blocks, double gamma, const Regularizer& R);

/// Mean of `blocks` by pairwise (recursive halving) summation in index order.
/// The result is a deterministic function of the inputs and their order.
Vec pairwise_mean(std::span<const Vec> blocks);

/// Regularizer on the stacked space R^{M d}: (R + psi_C)(x_1, ..., x_M).
/// value is R(x_1) on the consensus set and +inf elsewhere.
Regularizer consensus_regularizer(const Regularizer& R, std::size_t num_blocks, std::size_t block_dim);

}  // namespace proxrr
