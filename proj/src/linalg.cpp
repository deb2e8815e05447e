#include "emgalign/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "emgalign/errors.hpp"

namespace emgalign {

namespace {

constexpr double kJacobiTol = 1e-15;   // relative off-diagonal threshold
constexpr int kMaxSweeps = 100;

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

/// Flip u column j (and the matching row j of vt) so the largest-magnitude
/// entry of the u column is positive. Ties resolve to the smallest row index,
/// making the convention total and deterministic.
void fix_signs(Matrix& u, Matrix& vt) {
  for (std::size_t j = 0; j < u.cols(); ++j) {
    std::size_t arg = 0;
    double best = std::abs(u(0, j));
    for (std::size_t i = 1; i < u.rows(); ++i) {
      const double a = std::abs(u(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
      for (std::size_t c = 0; c < vt.cols(); ++c) vt(j, c) = -vt(j, c);
    }
  }
}

/// One-sided Jacobi on a tall (rows >= cols) matrix.
SvdResult svd_tall(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix w = m;
  Matrix v = Matrix::identity(cols);

  int sweeps = 0;
  for (; sweeps < kMaxSweeps; ++sweeps) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweeps == kMaxSweeps)
    throw NumericalError("svd: one-sided Jacobi did not converge after " +
                         std::to_string(kMaxSweeps) + " sweeps");

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(acc);
  }

  // descending order
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  Matrix u(rows, cols);
  Matrix v_sorted(cols, cols);
  std::vector<double> sigma_sorted(cols);
  const double sigma_max = sigma[order[0]];
  const double null_tol = static_cast<double>(std::max(rows, cols)) * sigma_max *
                          std::numeric_limits<double>::epsilon();

  std::vector<bool> filled(cols, false);
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t src = order[j];
    sigma_sorted[j] = sigma[src];
    for (std::size_t i = 0; i < cols; ++i) v_sorted(i, j) = v(i, src);
    if (sigma[src] > null_tol && sigma[src] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) u(i, j) = w(i, src) / sigma[src];
      filled[j] = true;
    }
  }

  // Complete u to a column-orthonormal basis where singular values vanished:
  // take the canonical basis vector with the largest residual after
  // projecting out the filled columns, re-orthogonalize, normalize.
  auto project_out_filled = [&](std::vector<double>& vec) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!filled[c]) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < rows; ++i) dot += u(i, c) * vec[i];
      for (std::size_t i = 0; i < rows; ++i) vec[i] -= dot * u(i, c);
    }
  };
  for (std::size_t j = 0; j < cols; ++j) {
    if (filled[j]) continue;
    std::vector<double> best_col;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < rows; ++k) {
      std::vector<double> cand(rows, 0.0);
      cand[k] = 1.0;
      project_out_filled(cand);
      double norm = 0.0;
      for (double x : cand) norm += x * x;
      if (norm > best_norm) {
        best_norm = norm;
        best_col = std::move(cand);
      }
    }
    project_out_filled(best_col);
    double norm = 0.0;
    for (double x : best_col) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) u(i, j) = best_col[i] / norm;
    filled[j] = true;
  }

  Matrix vt = transpose(v_sorted);
  fix_signs(u, vt);
  return {std::move(u), std::move(sigma_sorted), std::move(vt)};
}

}  // namespace

Matrix covariance(const Matrix& x, const Matrix& y) {
  if (x.empty() || y.empty()) throw ParameterError("covariance: empty input");
  if (x.cols() != y.cols())
    throw DimensionError("covariance: sample counts differ (" + std::to_string(x.cols()) +
                         " vs " + std::to_string(y.cols()) + ")");
  const std::size_t t = x.cols();
  Matrix out(x.rows(), y.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t s = 0; s < t; ++s) acc += x(i, s) * y(j, s);
      out(i, j) = acc / static_cast<double>(t);
    }
  }
  return out;
}

SymEig eigen_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigen_sym: matrix must be square");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double scale = std::max(frobenius_norm(m), 1e-300);

  int sweeps = 0;
  for (; sweeps < kMaxSweeps; ++sweeps) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= kJacobiTol * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= kJacobiTol * scale * 1e-2) continue;
        const double apq = a(p, q);
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = sign_of(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweeps == kMaxSweeps)
    throw NumericalError("eigen_sym: Jacobi did not converge after " +
                         std::to_string(kMaxSweeps) + " sweeps");

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });

  SymEig result{Matrix(n, n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    result.values[j] = values[order[j]];
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, j) = v(i, order[j]);
  }
  return result;
}

Matrix inv_sqrt_sym(const Matrix& m, double ridge) {
  if (m.rows() != m.cols()) throw DimensionError("inv_sqrt_sym: matrix must be square");
  if (ridge < 0.0) throw ParameterError("inv_sqrt_sym: ridge must be >= 0");
  const double tol = 1e-9 * std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw ParameterError("inv_sqrt_sym: matrix is not symmetric");

  const auto eig = eigen_sym(m);
  const std::size_t n = m.rows();
  std::vector<double> inv_roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = eig.values[i] + ridge;
    if (lambda <= 0.0)
      throw SingularityError(
          "inv_sqrt_sym: eigenvalue " + std::to_string(eig.values[i]) +
          " is not positive after ridge " + std::to_string(ridge) + "; raise the ridge");
    inv_roots[i] = 1.0 / std::sqrt(lambda);
  }

  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.vectors(i, k) * inv_roots[k] * eig.vectors(j, k);
      out(i, j) = acc;
      out(j, i) = acc;  // exactly symmetric by construction
    }
  }
  return out;
}

SvdResult svd(const Matrix& m) {
  if (m.empty()) throw ParameterError("svd: empty matrix");
  if (m.rows() >= m.cols()) return svd_tall(m);
  // wide input: decompose the transpose and swap the factor roles
  SvdResult t = svd_tall(transpose(m));
  SvdResult out{transpose(t.vt), std::move(t.sigma), transpose(t.u)};
  fix_signs(out.u, out.vt);
  return out;
}

Matrix pinv(const Matrix& m) {
  const SvdResult dec = svd(m);
  const std::size_t k = dec.sigma.size();
  const double sigma_max = dec.sigma.empty() ? 0.0 : dec.sigma.front();
  const double cutoff = static_cast<double>(std::max(m.rows(), m.cols())) * sigma_max * 1e-12;

  // pinv = V · diag(1/sigma where sigma > cutoff) · Uᵀ
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        if (dec.sigma[c] <= cutoff || dec.sigma[c] == 0.0) continue;
        acc += dec.vt(c, i) * dec.u(j, c) / dec.sigma[c];
      }
      out(i, j) = acc;
    }
  }
  return out;
}

double determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant: matrix must be square");
  const std::size_t n = m.rows();
  Matrix a = m;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

}  // namespace emgalign
