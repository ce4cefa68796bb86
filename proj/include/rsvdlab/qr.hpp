#pragma once

#include <cstddef>

#include "rsvdlab/dense_matrix.hpp"

namespace rsvdlab {

// Sub-columns whose norm falls to or below this fraction of ||Y||_F are treated
// as numerically zero, i.e. Y is rank deficient at that column.
inline constexpr double kRankTolerance = 1e-10;

struct QrBasis {
  DenseMatrix q;                      // m x ell, orthonormal columns
  std::size_t deficient_columns = 0;  // columns completed by continuation
};

// Economy Householder QR returning the explicit orthonormal factor.
//
// The first j columns of q span the first j columns of y whenever those are
// independent. A numerically zero working column is replaced by the first
// standard basis vector that still has a component outside the span built so
// far, so q always has exactly ell columns.
QrBasis householder_qr(const DenseMatrix& y, std::size_t ell);

inline DenseMatrix householder_qr_basis(const DenseMatrix& y, std::size_t ell) {
  return householder_qr(y, ell).q;
}

}  // namespace rsvdlab
