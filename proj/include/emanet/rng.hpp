#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace emanet {

/// Seeded generator used everywhere randomness is needed: a 64-bit Mersenne
/// Twister (std::mt19937_64, whose output sequence is fixed by the C++
/// standard) with the variate transforms implemented here rather than taken
/// from <random>, whose distributions are implementation-defined.
///
/// Stream splitting: child seeds are derive_seed(parent, label-or-index),
/// a SplitMix64 finalizer over the parent seed and an FNV-1a hash of the label.
/// One child per context run (label = context flag), one grandchild per
/// permutation iteration (index = iteration number).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller (one variate per call).
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

// k distinct positions from [0, n) via a partial Fisher-Yates shuffle, in draw
// order. Requires k <= n.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace emanet
