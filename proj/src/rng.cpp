#include "rsvdlab/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace rsvdlab {

RngStream::RngStream(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) {
    state += kGoldenGamma;
    word = splitmix64_mix(state);
  }
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RngStream::next_uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() noexcept {
  if (cached_gaussian_) {
    const double z = *cached_gaussian_;
    cached_gaussian_.reset();
    return z;
  }
  // 1 - u lies in (0, 1], so the logarithm is finite.
  const double u1 = next_uniform01();
  const double u2 = next_uniform01();
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

}  // namespace rsvdlab
