#pragma once

#include <cstddef>
#include <span>

#include "rsvdlab/dense_matrix.hpp"

namespace rsvdlab {

// Orthogonal projector onto col(S) through the normal equations,
// S (S^T S)^{-1} S^T. Throws SingularGram when cond(S^T S) > 1e12.
DenseMatrix normal_equation_projector(const DenseMatrix& s);

// A Omega (Omega^T A^T A Omega)^{-1} Omega^T A^T  (m x m).
DenseMatrix projector_normal_eq(const DenseMatrix& a, const DenseMatrix& omega);

// One sample of the integrand whose expectation is Lambda:
//   S (S^T S)^{-1} S^T  with  S = diag(sigma) V^T Omega,
// where sigma holds the m singular values and V is n x m.
DenseMatrix lambda_integrand(std::span<const double> sigma, const DenseMatrix& v,
                             const DenseMatrix& omega);

struct ShermanMorrisonSides {
  double lhs;  // sigma_j^2 z_j^T (sum_l sigma_l^2 z_l z_l^T)^{-1} z_j
  double rhs;  // 1 - 1 / (1 + sigma_j^2 z_j^T B_(-j)^{-1} z_j)
};

// z = Omega^T V (ell x r, columns z_l); the sums run over l < sigma.size().
// B_(-j) leaves out term j and must be positive definite (SingularGram otherwise).
ShermanMorrisonSides sherman_morrison_check(std::span<const double> sigma, const DenseMatrix& z,
                                            std::size_t j);

}  // namespace rsvdlab
