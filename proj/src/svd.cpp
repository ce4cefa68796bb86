#include "rsvdlab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

namespace {

// Column-major scratch: one contiguous vector per column keeps the rotation
// loops cache friendly.
using Columns = std::vector<std::vector<double>>;

Columns to_columns(const DenseMatrix& a) {
  Columns cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) cols[j] = a.column(j);
  return cols;
}

double sq_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void rotate(std::vector<double>& x, std::vector<double>& y, double c, double s) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Orthonormal completion of column `j` against columns [0, j) using the first
// standard basis vector with a usable residual (two passes of Gram-Schmidt).
std::vector<double> complete_column(const Columns& basis, std::size_t j, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> e(m, 0.0);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < j; ++c) {
        const double proj = dot(basis[c], e);
        for (std::size_t r = 0; r < m; ++r) e[r] -= proj * basis[c][r];
      }
    }
    const double nrm = std::sqrt(sq_norm(e));
    if (nrm > 1e-3) {
      for (double& v : e) v /= nrm;
      return e;
    }
  }
  // Unreachable while j < m: some e_i always has residual >= 1/sqrt(m).
  throw Error(ErrorKind::DimensionMismatch, "cannot complete orthonormal basis");
}

// Thin SVD of a tall (m >= n) matrix.
SvdResult jacobi_tall(const DenseMatrix& a, const JacobiOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w = to_columns(a);
  Columns v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  bool converged = n == 1;
  int sweep = 0;
  while (!converged) {
    if (sweep == options.max_sweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "jacobi_svd: not converged after " + std::to_string(sweep) + " sweeps (" +
                      std::to_string(m) + "x" + std::to_string(n) + ")");
    }
    ++sweep;
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq_norm(w[p]);
        const double beta = sq_norm(w[q]);
        const double gamma = dot(w[p], w[q]);
        if (gamma == 0.0 ||
            std::abs(gamma) <= options.rotation_threshold * std::sqrt(alpha) * std::sqrt(beta)) {
          continue;
        }
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t;
        if (std::abs(zeta) > 1e150) {
          t = 0.5 / zeta;
        } else {
          t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(w[p], w[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(sq_norm(w[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  const double sigma_max = norms[order[0]];
  const double negligible =
      sigma_max * static_cast<double>(m) * std::numeric_limits<double>::epsilon();

  SvdResult out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
  Columns ucols(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = norms[j];
    if (norms[j] > negligible && norms[j] > 0.0) {
      ucols[k] = w[j];
      for (double& x : ucols[k]) x /= norms[j];
    } else {
      ucols[k] = complete_column(ucols, k, m);
    }
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = ucols[k][i];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[j][i];
  }
  return out;
}

}  // namespace

SvdResult jacobi_svd(const DenseMatrix& a, const JacobiOptions& options) {
  if (!a.all_finite()) {
    throw Error(ErrorKind::NonFiniteResult, "jacobi_svd: input has non-finite entries");
  }
  SvdResult out = [&] {
    if (a.rows() >= a.cols()) return jacobi_tall(a, options);
    SvdResult t = jacobi_tall(transpose(a), options);
    return SvdResult{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }();
  canonicalize_signs(out);
  return out;
}

void canonicalize_signs(SvdResult& svd) {
  for (std::size_t k = 0; k < svd.rank(); ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < svd.u.rows(); ++i) {
      if (std::abs(svd.u(i, k)) > std::abs(svd.u(best, k))) best = i;
    }
    if (svd.u(best, k) < 0.0) {
      for (std::size_t i = 0; i < svd.u.rows(); ++i) svd.u(i, k) = -svd.u(i, k);
      for (std::size_t i = 0; i < svd.v.rows(); ++i) svd.v(i, k) = -svd.v(i, k);
    }
  }
}

SvdResult truncate(const SvdResult& svd, std::size_t k) {
  if (k == 0 || k > svd.rank()) {
    throw Error(ErrorKind::RankTooLarge, "truncate: k=" + std::to_string(k) +
                                             " outside [1, " + std::to_string(svd.rank()) + "]");
  }
  return SvdResult{svd.u.leading_columns(k),
                   std::vector<double>(svd.sigma.begin(), svd.sigma.begin() + static_cast<std::ptrdiff_t>(k)),
                   svd.v.leading_columns(k)};
}

DenseMatrix reconstruct(const SvdResult& svd) {
  DenseMatrix us = svd.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t k = 0; k < svd.rank(); ++k) us(i, k) *= svd.sigma[k];
  return matmul(us, transpose(svd.v));
}

}  // namespace rsvdlab
