#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tntf::rng {

// Counter-based generator: output number `counter` of a SplitMix64 stream
// whose state is initialised to mix64(seed). Any counter can be evaluated
// independently, so per-pixel draws are reproducible in any order.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(mix64(seed) + (counter + 1) * kGolden);
}

/// Uniform on (0,1], 53-bit resolution.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>((counter_bits(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal for sample `index` via Box-Muller on counters 2*index and
/// 2*index+1 (cosine branch only).
inline double counter_gaussian(std::uint64_t seed, std::uint64_t index) noexcept {
  const double u1 = counter_uniform(seed, 2 * index);
  const double u2 = counter_uniform(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace tntf::rng
