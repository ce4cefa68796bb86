#pragma once

#include <cstddef>
#include <cstdint>

#include "rsvdlab/dense_matrix.hpp"
#include "rsvdlab/qr.hpp"
#include "rsvdlab/sketch.hpp"
#include "rsvdlab/svd.hpp"

namespace rsvdlab {

enum class RsvdMode {
  // ell <= min(m, n); exactness checks use ell == m.
  Approximation,
  // ell < m <= n, the setting of the consistency theorem.
  Theorem,
};

struct RsvdConfig {
  std::size_t k = 1;
  std::size_t p = 0;
  std::size_t q = 0;
  SketchDistribution dist = SketchDistribution::StandardGaussian;
  std::uint64_t seed = 0;
  RsvdMode mode = RsvdMode::Approximation;

  std::size_t ell() const noexcept { return k + p; }

  // Throws ConfigError for k == 0 or ell > min(m, n), TheoremModeViolation when
  // theorem mode is requested and ell < m <= n does not hold.
  void validate(std::size_t m, std::size_t n) const;
};

struct RsvdResult {
  SvdResult truncated;  // rank k
  SvdResult full_ell;   // rank ell, before truncation
  DenseMatrix q_basis;  // m x ell
  bool rank_deficient = false;
};

// (A A^T)^q A Omega, evaluated right to left as a chain of thin products.
DenseMatrix power_sketch(const DenseMatrix& a, const DenseMatrix& omega, std::size_t q);

// Range finder: sample Omega, form Y, orthonormalize.
QrBasis sketch_basis(const DenseMatrix& a, const RsvdConfig& cfg);

RsvdResult rsvd(const DenseMatrix& a, const RsvdConfig& cfg);

// Same pipeline with a caller-supplied sketch (n x ell).
RsvdResult rsvd_with_sketch(const DenseMatrix& a, const DenseMatrix& omega, std::size_t k,
                            std::size_t q);

SvdResult exact_truncated_svd(const DenseMatrix& a, std::size_t k);

}  // namespace rsvdlab
