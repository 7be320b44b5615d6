#pragma once

#include <cstdint>
#include <random>

namespace countstable {

/// Caller-owned generator state. Samplers never share or hide one.
using Rng = std::mt19937_64;

/// Seed used by the CLI when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 20240607ULL;

/// Uniform on the open interval (0,1) with 53 random bits.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Exact Poisson(rate) draw: inversion below rate 30, rejection above.
std::uint64_t sample_poisson(double rate, Rng& rng);

/// a + b clamped to the largest representable count.
inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

}  // namespace countstable
