#include "rsvdlab/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

namespace {

std::string shape(const DenseMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_finite(const DenseMatrix& a, const char* what) {
  if (!a.all_finite()) {
    throw Error(ErrorKind::NonFiniteResult, std::string(what) + " produced non-finite entries");
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimensions must be at least 1x1");
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimensions must be at least 1x1");
  }
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(rows * cols) + " entries, got " +
                    std::to_string(data_.size()));
  }
  require_finite(*this, "matrix construction");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must have at least one row and column");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw Error(ErrorKind::DimensionMismatch,
                  "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(cols));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  return DenseMatrix(rows.size(), cols, std::move(entries));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix eye(n, n);
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix d(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d(i, i) = values[i];
  return d;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::leading_columns(std::size_t count) const {
  if (count == 0 || count > cols_) {
    throw Error(ErrorKind::DimensionMismatch,
                "cannot take " + std::to_string(count) + " columns of a " + shape(*this) +
                    " matrix");
  }
  DenseMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_), count,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * count));
  }
  return out;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "matmul: " + shape(a) + " * " + shape(b));
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  }
  require_finite(c, "matmul");
  return c;
}

DenseMatrix matmul_transposed_left(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matmul: (" + shape(a) + ")^T * " + shape(b));
  }
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double ali = a(l, i);
      if (ali == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ali * b(l, j);
    }
  }
  require_finite(c, "matmul");
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double frobenius_norm(const DenseMatrix& a) {
  // Scaled accumulation keeps the norm finite for entries near the overflow
  // threshold.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : a.data()) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "add");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  require_finite(c, "add");
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "subtract");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  require_finite(c, "subtract");
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& x : c.data()) x *= s;
  require_finite(c, "scale");
  return c;
}

double trace(const DenseMatrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace rsvdlab
