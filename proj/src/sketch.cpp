#include "rsvdlab/sketch.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace rsvdlab {

namespace {

constexpr std::array<std::pair<SketchDistribution, std::string_view>, 5> kNames{{
    {SketchDistribution::StandardGaussian, "gaussian"},
    {SketchDistribution::UniformSym, "uniform"},
    {SketchDistribution::StudentT3, "t3"},
    {SketchDistribution::ShiftedExponential, "shifted-exp"},
    {SketchDistribution::Rademacher, "rademacher"},
}};

}  // namespace

std::string_view to_string(SketchDistribution dist) noexcept {
  for (const auto& [d, name] : kNames)
    if (d == dist) return name;
  return "unknown";
}

std::optional<SketchDistribution> parse_distribution(std::string_view name) noexcept {
  for (const auto& [d, n] : kNames)
    if (n == name) return d;
  return std::nullopt;
}

double sample_scalar(RngStream& stream, SketchDistribution dist) noexcept {
  switch (dist) {
    case SketchDistribution::StandardGaussian:
      return stream.next_gaussian();
    case SketchDistribution::UniformSym:
      return 2.0 * stream.next_uniform01() - 1.0;
    case SketchDistribution::StudentT3: {
      const double z = stream.next_gaussian();
      double chi2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double g = stream.next_gaussian();
        chi2 += g * g;
      }
      return z / std::sqrt(chi2 / 3.0);
    }
    case SketchDistribution::ShiftedExponential:
      return -std::log(1.0 - stream.next_uniform01()) - 1.0;
    case SketchDistribution::Rademacher:
      return stream.next_uniform01() < 0.5 ? -1.0 : 1.0;
  }
  return 0.0;
}

DenseMatrix sample_sketch(std::size_t n, std::size_t ell, SketchDistribution dist,
                          std::uint64_t seed) {
  RngStream stream(seed);
  DenseMatrix omega(n, ell);
  for (double& x : omega.data()) x = sample_scalar(stream, dist);
  return omega;
}

}  // namespace rsvdlab
