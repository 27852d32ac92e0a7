#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace tlkm {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of the generator.
// std::uniform_real_distribution is implementation-defined, which would
// break the bit-identical reproducibility contract across toolchains.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound), bound >= 1, by rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

// Fisher-Yates with the in-house bounded draw, for the same reason as
// uniform01: std::shuffle consumes the generator differently per stdlib.
template <typename T>
void shuffle_indices(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_below(rng, i)]);
  }
}

inline std::vector<int> iota_indices(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace tlkm
