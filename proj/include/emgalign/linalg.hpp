#pragma once

#include <vector>

#include "emgalign/matrix.hpp"

namespace emgalign {

/// Thin SVD: m = u · diag(sigma) · vt with k = min(rows, cols) components.
/// u is rows×k column-orthonormal, vt is k×cols row-orthonormal, sigma is
/// descending and non-negative. Left singular vectors are sign-fixed so the
/// largest-magnitude entry of each u column is positive (paired vt row
/// flipped to match), which makes the decomposition deterministic.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix vt;
};

/// Symmetric eigendecomposition, eigenvalues descending, vectors in columns.
struct SymEig {
  Matrix vectors;
  std::vector<double> values;
};

/// (1/T) · x · yᵀ for x (n×T), y (p×T). Inputs are assumed centered by the
/// caller; the 1/T normalization keeps magnitudes comparable across sessions
/// of different length (it cancels inside the CCA whitening).
Matrix covariance(const Matrix& x, const Matrix& y);

/// Cyclic Jacobi eigensolver for symmetric matrices.
SymEig eigen_sym(const Matrix& m);

/// (m + ridge·I)^(-1/2) via eigendecomposition. m must be symmetric within
/// 1e-9 and m + ridge·I positive definite; otherwise SingularityError tells
/// the caller to raise the ridge.
Matrix inv_sqrt_sym(const Matrix& m, double ridge);

/// One-sided Jacobi SVD (NumericalError with the sweep count on
/// non-convergence; never observed below a few hundred dimensions).
SvdResult svd(const Matrix& m);

/// Moore-Penrose pseudo-inverse via SVD with singular-value cutoff
/// max(rows, cols) · sigma_max · 1e-12.
Matrix pinv(const Matrix& m);

/// Determinant via LU with partial pivoting.
double determinant(const Matrix& m);

}  // namespace emgalign
