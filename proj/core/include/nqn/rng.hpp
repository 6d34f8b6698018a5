// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace nqn {

// Counter-based generator built on the splitmix64 finalizer. The value at
// stream position i depends only on (seed, i), so draws are reproducible
// across platforms and can be generated out of order. This is what makes
// starting points portable: they are a pure function of (seed, coordinate).

inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform draw in [0, 1) at stream position `index`.
inline double uniform01_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix64_at(seed, index) >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi) at stream position `index`.
inline double uniform_at(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
  return lo + (hi - lo) * uniform01_at(seed, index);
}

}  // namespace nqn
