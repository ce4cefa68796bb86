#pragma once

#include "rsvdlab/dense_matrix.hpp"

namespace rsvdlab {

inline constexpr double kMaxGramCondition = 1e12;

// Cholesky factor of a symmetric positive definite matrix. Construction
// estimates the 2-norm condition number from the matrix eigenvalues and throws
// ErrorKind::SingularGram above `max_condition`.
class SpdFactor {
 public:
  explicit SpdFactor(const DenseMatrix& g, double max_condition = kMaxGramCondition);

  // G^{-1} B
  DenseMatrix solve(const DenseMatrix& b) const;
  double condition() const noexcept { return condition_; }

 private:
  DenseMatrix lower_;
  double condition_ = 1.0;
};

}  // namespace rsvdlab
