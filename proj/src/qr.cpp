#include "rsvdlab/qr.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

namespace {

// H = I - 2 v v^T acting on rows [offset, m). An empty v is the identity.
struct Reflector {
  std::size_t offset = 0;
  std::vector<double> v;

  void apply(std::span<double> x) const {
    if (v.empty()) return;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * x[offset + i];
    s *= 2.0;
    for (std::size_t i = 0; i < v.size(); ++i) x[offset + i] -= s * v[i];
  }
};

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

Reflector make_reflector(std::span<const double> x, std::size_t offset) {
  Reflector h;
  h.offset = offset;
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i] * x[i];
  if (tail == 0.0) return h;

  const double beta = -std::copysign(std::sqrt(x[0] * x[0] + tail), x[0]);
  h.v.assign(x.begin(), x.end());
  h.v[0] -= beta;
  const double vn = norm2(h.v);
  for (double& vi : h.v) vi /= vn;
  return h;
}

}  // namespace

QrBasis householder_qr(const DenseMatrix& y, std::size_t ell) {
  const std::size_t m = y.rows();
  if (ell == 0 || y.cols() != ell || m < ell) {
    throw Error(ErrorKind::DimensionMismatch,
                "householder_qr: need an m x ell matrix with m >= ell >= 1, got " +
                    std::to_string(m) + "x" + std::to_string(y.cols()) + " with ell=" +
                    std::to_string(ell));
  }

  const double tol = kRankTolerance * frobenius_norm(y);

  // Work column-wise on a copy of y.
  std::vector<std::vector<double>> cols(ell);
  for (std::size_t j = 0; j < ell; ++j) cols[j] = y.column(j);

  std::vector<Reflector> reflectors;
  reflectors.reserve(ell);
  std::size_t deficient = 0;

  for (std::size_t j = 0; j < ell; ++j) {
    std::span<const double> work(cols[j]);
    if (norm2(work.subspan(j)) <= tol) {
      ++deficient;
      // Continuation: first e_i whose transformed tail is not negligible.
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> e(m, 0.0);
        e[i] = 1.0;
        for (const auto& h : reflectors) h.apply(e);
        if (norm2(std::span<const double>(e).subspan(j)) > kRankTolerance) {
          cols[j] = std::move(e);
          break;
        }
      }
    }

    reflectors.push_back(make_reflector(std::span<const double>(cols[j]).subspan(j), j));
    for (std::size_t c = j + 1; c < ell; ++c) reflectors.back().apply(cols[c]);
  }

  // Q = H_0 H_1 ... H_{ell-1} [I; 0]
  DenseMatrix q(m, ell);
  std::vector<double> e(m);
  for (std::size_t j = 0; j < ell; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    for (auto h = reflectors.rbegin(); h != reflectors.rend(); ++h) h->apply(e);
    for (std::size_t i = 0; i < m; ++i) q(i, j) = e[i];
  }
  return {std::move(q), deficient};
}

}  // namespace rsvdlab
