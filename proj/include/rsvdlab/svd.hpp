#pragma once

#include <cstddef>
#include <vector>

#include "rsvdlab/dense_matrix.hpp"

namespace rsvdlab {

// A = U diag(sigma) V^T with r = sigma.size() columns in U (m x r) and V (n x r).
// Singular values are non-increasing. Each column of U has its largest-magnitude
// entry (lowest row on ties) non-negative; V carries the compensating sign.
struct SvdResult {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;

  std::size_t rank() const noexcept { return sigma.size(); }
};

struct JacobiOptions {
  double rotation_threshold = 1e-14;
  int max_sweeps = 60;
};

// One-sided (Hestenes) Jacobi SVD, returning the thin factorization with
// r = min(m, n). Throws ErrorKind::NoConvergence when max_sweeps is exhausted.
SvdResult jacobi_svd(const DenseMatrix& a, const JacobiOptions& options = {});

// Leading k triplets. Throws ErrorKind::RankTooLarge unless 1 <= k <= r.
SvdResult truncate(const SvdResult& svd, std::size_t k);

// U diag(sigma) V^T
DenseMatrix reconstruct(const SvdResult& svd);

// Flip column signs so that each U column's largest-|entry| is non-negative.
void canonicalize_signs(SvdResult& svd);

}  // namespace rsvdlab
