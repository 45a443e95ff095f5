#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace proxrr {

using Permutation = std::vector<std::size_t>;

enum class PermutationMode {
  reshuffle,     ///< fresh permutation every epoch (RR)
  shuffle_once,  ///< the epoch-0 permutation reused forever (SO)
};

/// Seeded, random-access source of permutations of {0, ..., n-1}.
///
/// The permutation of epoch t is a Fisher-Yates shuffle of the identity
/// driven by Rng(seed, StreamTag::permutation, t). In shuffle-once mode every
/// epoch returns the epoch-0 permutation, so RR and SO agree on epoch 0.
class PermutationStream {
 public:
  PermutationStream(std::uint64_t seed, std::size_t n, PermutationMode mode);

  std::size_t size() const noexcept { return n_; }
  PermutationMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Permutation used in `epoch`. Writes into `out` (resized to n).
  void next_permutation(std::size_t epoch, Permutation& out);
  Permutation next_permutation(std::size_t epoch);

 private:
  std::uint64_t seed_;
  std::size_t n_;
  PermutationMode mode_;
  Permutation fixed_;
};

/// In-place Fisher-Yates shuffle of `perm` driven by a generator seeded with `seed`.
void shuffle_with_seed(Permutation& perm, std::uint64_t seed);

bool is_permutation_of_iota(const Permutation& perm);

}  // namespace proxrr

namespace proxrr {

/// Seed of the permutation stream with index `stream` inside a run seeded by
/// `run_seed`. Single-machine optimizers use stream 0; federated client m
/// uses stream m (or stream 0 for every client when permutations are
/// synchronized across clients).
std::uint64_t permutation_stream_seed(std::uint64_t run_seed, std::size_t stream);

}  // namespace proxrr
