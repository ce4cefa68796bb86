#include "rsvdlab/identities.hpp"

#include <string>

#include "rsvdlab/error.hpp"
#include "rsvdlab/spd.hpp"

namespace rsvdlab {

DenseMatrix normal_equation_projector(const DenseMatrix& s) {
  const SpdFactor gram(matmul_transposed_left(s, s));
  // S G^{-1} S^T; symmetrize to remove rounding asymmetry.
  DenseMatrix p = matmul(s, gram.solve(transpose(s)));
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = i + 1; j < p.cols(); ++j) {
      const double avg = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = avg;
      p(j, i) = avg;
    }
  }
  return p;
}

DenseMatrix projector_normal_eq(const DenseMatrix& a, const DenseMatrix& omega) {
  return normal_equation_projector(matmul(a, omega));
}

DenseMatrix lambda_integrand(std::span<const double> sigma, const DenseMatrix& v,
                             const DenseMatrix& omega) {
  if (v.cols() != sigma.size() || v.rows() != omega.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "lambda_integrand: need V (n x m) matching sigma (m) and Omega (n x ell)");
  }
  DenseMatrix s = matmul_transposed_left(v, omega);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) s(i, j) *= sigma[i];
  return normal_equation_projector(s);
}

namespace {

// sum over l < count, l != skip, of w_l z_l z_l^T
DenseMatrix weighted_outer_sum(std::span<const double> weights, const DenseMatrix& z,
                               std::size_t skip) {
  const std::size_t ell = z.rows();
  DenseMatrix b(ell, ell);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (l == skip) continue;
    for (std::size_t r = 0; r < ell; ++r)
      for (std::size_t c = 0; c < ell; ++c) b(r, c) += weights[l] * z(r, l) * z(c, l);
  }
  return b;
}

double quadratic_form(const SpdFactor& f, const DenseMatrix& z, std::size_t j) {
  DenseMatrix zj(z.rows(), 1);
  for (std::size_t r = 0; r < z.rows(); ++r) zj(r, 0) = z(r, j);
  const DenseMatrix x = f.solve(zj);
  double s = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) s += zj(r, 0) * x(r, 0);
  return s;
}

}  // namespace

ShermanMorrisonSides sherman_morrison_check(std::span<const double> sigma, const DenseMatrix& z,
                                            std::size_t j) {
  if (sigma.size() > z.cols() || j >= sigma.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "sherman_morrison_check: index " + std::to_string(j) + " outside sigma/Z");
  }
  std::vector<double> weights(sigma.size());
  for (std::size_t l = 0; l < sigma.size(); ++l) weights[l] = sigma[l] * sigma[l];

  const SpdFactor full(weighted_outer_sum(weights, z, sigma.size()));
  const SpdFactor without_j(weighted_outer_sum(weights, z, j));

  const double lhs = weights[j] * quadratic_form(full, z, j);
  const double rhs = 1.0 - 1.0 / (1.0 + weights[j] * quadratic_form(without_j, z, j));
  return {lhs, rhs};
}

}  // namespace rsvdlab
