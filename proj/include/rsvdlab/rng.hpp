#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace rsvdlab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Stafford variant 13).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent per-trial seed; injective in trial_index for a fixed master.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                          std::uint64_t trial_index) noexcept {
  return splitmix64_mix(master_seed ^ (trial_index * kGoldenGamma));
}

// xoshiro256** seeded by four SplitMix64 outputs, plus a one-slot cache for the
// second Box-Muller variate. Single owner; never share between threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53-bit resolution.
  double next_uniform01() noexcept;
  // Standard normal via Box-Muller; each pair consumes two uniforms.
  double next_gaussian() noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> cached_gaussian_;
};

}  // namespace rsvdlab
