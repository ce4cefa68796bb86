#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rsvdlab {

// Dense real matrix stored row-major. Shapes are at least 1x1.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  // Throws ErrorKind::DimensionMismatch for ragged or empty input and
  // ErrorKind::NonFiniteResult for NaN/Inf entries.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  std::vector<double> column(std::size_t j) const;
  // Leading `count` columns as a new matrix.
  DenseMatrix leading_columns(std::size_t count) const;

  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);

// a^T b without forming the transpose.
DenseMatrix matmul_transposed_left(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

double trace(const DenseMatrix& a);
double dot(std::span<const double> x, std::span<const double> y) noexcept;

}  // namespace rsvdlab
