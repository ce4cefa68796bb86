#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rsvdlab/dense_matrix.hpp"
#include "rsvdlab/rng.hpp"

namespace rsvdlab {

// The five zero-mean entry laws for the sketch matrix.
//
// Variate budget per scalar, in uniforms drawn from the stream:
//   StandardGaussian    1 Gaussian (2 uniforms per Box-Muller pair)
//   UniformSym          1 uniform,          2u - 1
//   StudentT3           4 Gaussians,        Z / sqrt((G1^2 + G2^2 + G3^2) / 3)
//   ShiftedExponential  1 uniform,          -log(1 - u) - 1
//   Rademacher          1 uniform,          u < 1/2 ? -1 : +1
enum class SketchDistribution : std::uint8_t {
  StandardGaussian = 0,
  UniformSym = 1,
  StudentT3 = 2,
  ShiftedExponential = 3,
  Rademacher = 4,
};

// CLI spellings: gaussian, uniform, t3, shifted-exp, rademacher.
std::string_view to_string(SketchDistribution dist) noexcept;
std::optional<SketchDistribution> parse_distribution(std::string_view name) noexcept;

double sample_scalar(RngStream& stream, SketchDistribution dist) noexcept;

// n x ell matrix filled row-major from a fresh stream seeded with `seed`.
DenseMatrix sample_sketch(std::size_t n, std::size_t ell, SketchDistribution dist,
                          std::uint64_t seed);

}  // namespace rsvdlab
