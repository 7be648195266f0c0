#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace orbitfam {

/// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed with
/// splitmix64. The algorithm and seeding are part of the public contract:
/// sequences for a given seed never change across releases.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double next_open01();

  const std::array<std::uint64_t, 4>& state() const { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

/// n uniforms in (0, 1) from a fresh generator seeded with `seed`.
std::vector<double> rng_uniform(std::uint64_t seed, std::size_t n);

}  // namespace orbitfam
