#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace emgalign {

/// Dense row-major matrix of doubles.
///
/// Invariants: rows >= 1, cols >= 1, entries.size() == rows*cols, and every
/// entry is finite when constructed from caller-supplied values. A
/// default-constructed Matrix is an empty placeholder (rows == cols == 0)
/// useful only as a moved-from / not-yet-assigned state.
class Matrix {
 public:
  Matrix() = default;

  /// Zero matrix.
  Matrix(std::size_t rows, std::size_t cols);

  /// From row-major entries; validates size and finiteness.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& entries() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double factor);

/// a*b with dimension checking. Dispatches through kernels::matmul.
Matrix multiply(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Extract column c as a vector.
std::vector<double> column(const Matrix& m, std::size_t c);

/// Assemble a matrix whose columns are the given equal-length vectors.
Matrix from_columns(const std::vector<std::vector<double>>& cols);

/// Debug CSV serialization (test fixtures only): bare numeric rows, 17
/// significant digits, bit-exact round-trip.
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace emgalign
