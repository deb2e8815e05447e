#include "emgalign/matrix.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/kernels.hpp"

namespace emgalign {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows < 1 || cols < 1) throw ParameterError("matrix dimensions must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows < 1 || cols < 1) throw ParameterError("matrix dimensions must be >= 1");
  if (data_.size() != rows * cols) {
    throw DimensionError("entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DataError("matrix entries must be finite");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

namespace {
void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}
}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "subtract");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix scale(const Matrix& m, double factor) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) out.data()[i] = m.data()[i] * factor;
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  return kernels::matmul(a, b, kernels::default_exec());
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.entries()) s = std::max(s, std::abs(v));
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "max_abs_diff");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
    s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
  return s;
}

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> v(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
  return v;
}

Matrix from_columns(const std::vector<std::vector<double>>& cols) {
  if (cols.empty()) throw ParameterError("from_columns: no columns");
  const std::size_t n = cols.front().size();
  Matrix out(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n) throw DimensionError("from_columns: ragged column lengths");
    for (std::size_t r = 0; r < n; ++r) out(r, c) = cols[c][r];
  }
  return out;
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::string text;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) text += ',';
      text += csv::format(m(r, c));
    }
    text += '\n';
  }
  csv::write_file(path, text);
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = csv::split(lines[i]);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(csv::parse_double(f, path.string() + " row " + std::to_string(i + 1)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IngestError("empty matrix file: " + path.string());
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols())
      throw IngestError("ragged row " + std::to_string(r + 1) + " in " + path.string());
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = rows[r][c];
  }
  return out;
}

}  // namespace emgalign
