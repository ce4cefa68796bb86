#include "rsvdlab/rsvd.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

void RsvdConfig::validate(std::size_t m, std::size_t n) const {
  if (k == 0) throw Error(ErrorKind::ConfigError, "k must be at least 1");
  const std::size_t l = ell();
  if (mode == RsvdMode::Theorem && !(l < m && m <= n)) {
    throw Error(ErrorKind::TheoremModeViolation,
                "theorem mode needs ell < m <= n, got ell=" + std::to_string(l) +
                    ", m=" + std::to_string(m) + ", n=" + std::to_string(n));
  }
  if (l > std::min(m, n)) {
    throw Error(ErrorKind::ConfigError, "ell=" + std::to_string(l) + " exceeds min(m, n)=" +
                                            std::to_string(std::min(m, n)));
  }
}

DenseMatrix power_sketch(const DenseMatrix& a, const DenseMatrix& omega, std::size_t q) {
  if (a.cols() != omega.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "power_sketch: A has " + std::to_string(a.cols()) + " columns, Omega has " +
                    std::to_string(omega.rows()) + " rows");
  }
  try {
    DenseMatrix y = matmul(a, omega);
    for (std::size_t i = 0; i < q; ++i) y = matmul(a, matmul_transposed_left(a, y));
    return y;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonFiniteResult) throw;
    std::ostringstream msg;
    msg << "power_sketch overflowed with q=" << q << ", ||A||_F=" << frobenius_norm(a);
    throw Error(ErrorKind::NonFiniteResult, msg.str());
  }
}

QrBasis sketch_basis(const DenseMatrix& a, const RsvdConfig& cfg) {
  const DenseMatrix omega = sample_sketch(a.cols(), cfg.ell(), cfg.dist, cfg.seed);
  return householder_qr(power_sketch(a, omega, cfg.q), cfg.ell());
}

namespace {

RsvdResult finish(const DenseMatrix& a, QrBasis basis, std::size_t k) {
  // Q^T A = W S V^T, then U = Q W.
  SvdResult small = jacobi_svd(matmul_transposed_left(basis.q, a));
  SvdResult full{matmul(basis.q, small.u), std::move(small.sigma), std::move(small.v)};
  canonicalize_signs(full);
  SvdResult top = truncate(full, k);
  return RsvdResult{std::move(top), std::move(full), std::move(basis.q),
                    basis.deficient_columns > 0};
}

}  // namespace

RsvdResult rsvd(const DenseMatrix& a, const RsvdConfig& cfg) {
  cfg.validate(a.rows(), a.cols());
  return finish(a, sketch_basis(a, cfg), cfg.k);
}

RsvdResult rsvd_with_sketch(const DenseMatrix& a, const DenseMatrix& omega, std::size_t k,
                            std::size_t q) {
  const std::size_t ell = omega.cols();
  if (k == 0 || k > ell) {
    throw Error(ErrorKind::ConfigError, "k must lie in [1, ell]");
  }
  if (ell > std::min(a.rows(), a.cols())) {
    throw Error(ErrorKind::ConfigError, "sketch width exceeds min(m, n)");
  }
  return finish(a, householder_qr(power_sketch(a, omega, q), ell), k);
}

SvdResult exact_truncated_svd(const DenseMatrix& a, std::size_t k) {
  if (k == 0 || k > std::min(a.rows(), a.cols())) {
    throw Error(ErrorKind::RankTooLarge, "exact_truncated_svd: k=" + std::to_string(k) +
                                             " outside [1, min(m, n)]");
  }
  return truncate(jacobi_svd(a), k);
}

}  // namespace rsvdlab
