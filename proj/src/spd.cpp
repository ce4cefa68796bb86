#include "rsvdlab/spd.hpp"

#include <cmath>
#include <sstream>

#include "rsvdlab/error.hpp"
#include "rsvdlab/svd.hpp"

namespace rsvdlab {

SpdFactor::SpdFactor(const DenseMatrix& g, double max_condition) : lower_(g.rows(), g.cols()) {
  const std::size_t n = g.rows();
  if (g.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "SpdFactor: matrix is not square");
  }

  // For a symmetric PSD matrix the singular values are the eigenvalues.
  const SvdResult eig = jacobi_svd(g);
  const double largest = eig.sigma.front();
  const double smallest = eig.sigma.back();
  if (!(smallest > 0.0) || largest > max_condition * smallest) {
    std::ostringstream msg;
    msg << "Gram matrix is numerically singular (condition estimate "
        << (smallest > 0.0 ? largest / smallest : INFINITY) << " > " << max_condition << ")";
    throw Error(ErrorKind::SingularGram, msg.str());
  }
  condition_ = largest / smallest;

  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorKind::SingularGram, "Gram matrix is not positive definite");
    }
    lower_(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / lower_(j, j);
    }
  }
}

DenseMatrix SpdFactor::solve(const DenseMatrix& b) const {
  const std::size_t n = lower_.rows();
  if (b.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "SpdFactor::solve: right-hand side has wrong rows");
  }
  DenseMatrix x = b;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x(k, c);
      x(i, c) = s / lower_(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= lower_(k, i) * x(k, c);
      x(i, c) = s / lower_(i, i);
    }
  }
  return x;
}

}  // namespace rsvdlab
