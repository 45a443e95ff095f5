#include "proxrr/permutation.hpp"

#include <numeric>
#include <utility>

#include "proxrr/rng.hpp"

namespace proxrr {

void shuffle_with_seed(Permutation& perm, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
}

bool is_permutation_of_iota(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (const std::size_t v : perm) {
    if (v >= perm.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

PermutationStream::PermutationStream(std::uint64_t seed, std::size_t n, PermutationMode mode)
    : seed_(seed), n_(n), mode_(mode) {
  if (mode_ == PermutationMode::shuffle_once) {
    fixed_.resize(n_);
    std::iota(fixed_.begin(), fixed_.end(), std::size_t{0});
    shuffle_with_seed(fixed_, derive_seed(seed_, StreamTag::permutation, 0));
  }
}

void PermutationStream::next_permutation(std::size_t epoch, Permutation& out) {
  if (mode_ == PermutationMode::shuffle_once) {
    out = fixed_;
    return;
  }
  out.resize(n_);
  std::iota(out.begin(), out.end(), std::size_t{0});
  shuffle_with_seed(out, derive_seed(seed_, StreamTag::permutation, epoch));
}

Permutation PermutationStream::next_permutation(std::size_t epoch) {
  Permutation out;
  next_permutation(epoch, out);
  return out;
}

}  // namespace proxrr

namespace proxrr {

std::uint64_t permutation_stream_seed(std::uint64_t run_seed, std::size_t stream) {
  return derive_seed(run_seed, StreamTag::permutation, stream);
}

}  // namespace proxrr
