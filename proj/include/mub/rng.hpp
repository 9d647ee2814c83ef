#pragma once

#include <cstdint>

namespace mub {

/// splitmix64 step; used as a counter-based generator so that any draw can be
/// reproduced from (seed, index) alone.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t stream_state(uint64_t seed, uint64_t key, uint64_t index) {
  return seed ^ (0xD1B54A32D192ED03ull * (index + 1)) ^ (0x8CB92BA72F3D8DD7ull * key);
}

/// Uniform double in [0, 1).
inline double uniform01(uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

}  // namespace mub
