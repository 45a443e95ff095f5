#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace proxrr {

/// Purpose tags for substream derivation. Values are part of the
/// reproducibility contract; never renumber.
enum class StreamTag : std::uint64_t {
  permutation = 1,
  sgd_index = 2,
  dataset = 3,
  monte_carlo = 4,
  instance = 5,
  partition = 6,
};

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64 bits.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream (seed, tag, index):
///   mix(mix(mix(seed) ^ tag) ^ index)
/// where mix is the SplitMix64 finalizer. Nesting calls derives
/// deeper substreams, e.g. derive_seed(derive_seed(s, permutation, client), permutation, epoch).
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept {
  return splitmix64_mix(splitmix64_mix(splitmix64_mix(seed) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64.
/// Satisfies UniformRandomBitGenerator. All derived distributions below are
/// implemented here rather than through <random> so that streams are
/// identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;
  Rng(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept
      : Rng(derive_seed(seed, tag, index)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform integer in [0, bound) by Lemire's nearly-divisionless method. bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; caches the second variate.
  double normal() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace proxrr
