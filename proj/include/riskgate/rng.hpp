#pragma once

#include <cstdint>

namespace riskgate::rng {

/// Stateless counter-based generator: every variate is the SplitMix64
/// finalizer applied to a chained hash of (seed, batch, row, column, slot).
/// Draws are independent of execution order, so parallel batches reproduce
/// bit-identically.

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t draw_key(std::uint64_t seed, std::uint64_t batch,
                              std::uint64_t row, std::uint64_t col,
                              std::uint64_t slot) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ batch);
  h = mix(h ^ row);
  h = mix(h ^ col);
  h = mix(h ^ slot);
  return h;
}

/// Uniform double in [0, 1) from a 64-bit key (top 53 bits).
inline double to_unit(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t batch, std::uint64_t row,
                      std::uint64_t col, std::uint64_t slot) {
  return to_unit(draw_key(seed, batch, row, col, slot));
}

/// Unbiased integer in [0, bound) via rejection (bound > 0).
inline std::uint64_t bounded(std::uint64_t key, std::uint64_t bound,
                             std::uint64_t salt = 0) {
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t x = key;
  while (x >= limit) x = mix(x + ++salt);
  return x % bound;
}

}  // namespace riskgate::rng
