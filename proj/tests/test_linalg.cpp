#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "emgalign/errors.hpp"
#include "emgalign/linalg.hpp"
#include "emgalign/matrix.hpp"
#include "emgalign/rng.hpp"
#include "oracles.hpp"

using namespace emgalign;

namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = rng.normal();
  return m;
}

Matrix random_spd(Rng& rng, std::size_t n) {
  const Matrix g = random_matrix(rng, n, n);
  Matrix m = multiply(g, transpose(g));
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 1.0;
  return m;
}

Matrix random_rank(Rng& rng, std::size_t n, std::size_t rank) {
  return multiply(random_matrix(rng, n, rank), random_matrix(rng, rank, n));
}

double reconstruction_error(const Matrix& m, const SvdResult& dec) {
  Matrix rec(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dec.sigma.size(); ++k)
        acc += dec.u(i, k) * dec.sigma[k] * dec.vt(k, j);
      rec(i, j) = acc;
    }
  const double scale = std::max(frobenius_norm(m), 1e-300);
  return frobenius_norm(subtract(rec, m)) / scale;
}

double orthonormality_error(const Matrix& u) {
  // max |uᵀu - I|
  double worst = 0.0;
  for (std::size_t a = 0; a < u.cols(); ++a)
    for (std::size_t b = 0; b < u.cols(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < u.rows(); ++i) dot += u(i, a) * u(i, b);
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("matrix construction validates invariants") {
  CHECK_THROWS_AS(Matrix(0, 3), ParameterError);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::nan("")}), DataError);
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, INFINITY}), DataError);
  const Matrix m(2, 2, {1, 2, 3, 4});
  CHECK(m(1, 0) == 3.0);
}

TEST_CASE("matrix CSV round-trip is bit-exact") {
  Rng rng(99);
  const Matrix m = random_matrix(rng, 4, 6);
  const auto path = std::filesystem::temp_directory_path() / "emgalign_mat_test.csv";
  save_matrix_csv(m, path);
  CHECK(load_matrix_csv(path) == m);
  std::filesystem::remove(path);
}

TEST_CASE("covariance trivial cases") {
  const Matrix x(1, 2, {1.0, -1.0});
  CHECK(covariance(x, x)(0, 0) == doctest::Approx(1.0));
  const Matrix y(1, 2, {-1.0, 1.0});
  CHECK(covariance(x, y)(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("covariance matches the brute-force double loop") {
  Rng rng(7);
  const Matrix x = random_matrix(rng, 3, 50);
  const Matrix c = covariance(x, x);
  const Matrix ref = oracles::covariance_bruteforce(x, x);
  CHECK(max_abs_diff(c, ref) < 1e-12);
}

TEST_CASE("covariance rejects mismatched sample counts") {
  Rng rng(8);
  CHECK_THROWS_AS(covariance(random_matrix(rng, 2, 5), random_matrix(rng, 2, 6)),
                  DimensionError);
}

TEST_CASE("covariance(X,X) is symmetric positive semidefinite") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = random_matrix(rng, 5, 30);
    const Matrix c = covariance(x, x);
    CHECK(max_abs_diff(c, transpose(c)) < 1e-12);
    for (double lambda : eigen_sym(c).values) CHECK(lambda >= -1e-10);
  }
}

TEST_CASE("inv_sqrt_sym on identity and diagonal") {
  CHECK(max_abs_diff(inv_sqrt_sym(Matrix::identity(3), 0.0), Matrix::identity(3)) < 1e-12);
  const Matrix d(2, 2, {4.0, 0.0, 0.0, 9.0});
  const Matrix r = inv_sqrt_sym(d, 0.0);
  CHECK(r(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(r(0, 1)) < 1e-12);
}

TEST_CASE("inv_sqrt_sym reconstructs the identity on random SPD matrices") {
  Rng rng(21);
  const Matrix m = random_spd(rng, 8);
  const Matrix r = inv_sqrt_sym(m, 0.0);
  CHECK(max_abs_diff(multiply(multiply(r, m), r), Matrix::identity(8)) < 1e-8);
}

TEST_CASE("inv_sqrt_sym error paths") {
  const Matrix asym(2, 2, {1.0, 0.5, -0.5, 1.0});
  CHECK_THROWS_AS(inv_sqrt_sym(asym, 0.0), ParameterError);
  const Matrix indef(2, 2, {1.0, 0.0, 0.0, -2.0});
  CHECK_THROWS_AS(inv_sqrt_sym(indef, 0.0), SingularityError);
  CHECK_THROWS_AS(inv_sqrt_sym(Matrix::identity(2), -1.0), ParameterError);
  // the suggested fix works: a large enough ridge clears the error
  CHECK_NOTHROW(inv_sqrt_sym(indef, 3.0));
}

TEST_CASE("svd of diagonal and rotation matrices") {
  const Matrix d(2, 2, {3.0, 0.0, 0.0, 2.0});
  const SvdResult r = svd(d);
  CHECK(r.sigma[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.sigma[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(reconstruction_error(d, r) < 1e-12);

  const double th = 0.7;
  const Matrix rot(2, 2, {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)});
  for (double s : svd(rot).sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd singular values match the power-iteration oracle") {
  Rng rng(31);
  const Matrix m = random_matrix(rng, 8, 8);
  const SvdResult dec = svd(m);
  const auto oracle = oracles::power_iteration_singular_values(m);
  REQUIRE(oracle.size() == dec.sigma.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(dec.sigma[i] == doctest::Approx(oracle[i]).epsilon(1e-6));
}

TEST_CASE("svd contract on random shapes including rectangular") {
  Rng rng(37);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{8, 8}, {8, 3}, {3, 8}, {1, 5}, {5, 1}}) {
    const Matrix m = random_matrix(rng, rows, cols);
    const SvdResult dec = svd(m);
    const std::size_t k = std::min(rows, cols);
    REQUIRE(dec.sigma.size() == k);
    CHECK(dec.u.rows() == rows);
    CHECK(dec.u.cols() == k);
    CHECK(dec.vt.rows() == k);
    CHECK(dec.vt.cols() == cols);
    for (std::size_t i = 0; i + 1 < k; ++i) CHECK(dec.sigma[i] >= dec.sigma[i + 1]);
    for (double s : dec.sigma) CHECK(s >= 0.0);
    CHECK(reconstruction_error(m, dec) < 1e-9);
    CHECK(orthonormality_error(dec.u) < 1e-9);
    CHECK(orthonormality_error(transpose(dec.vt)) < 1e-9);
  }
}

TEST_CASE("svd sign convention makes the decomposition deterministic") {
  Rng rng(41);
  const Matrix m = random_matrix(rng, 6, 6);
  const SvdResult a = svd(m);
  const SvdResult b = svd(m);
  CHECK(a.u == b.u);
  CHECK(a.vt == b.vt);
  CHECK(a.sigma == b.sigma);
  // largest-|entry| element of every left singular vector is positive
  for (std::size_t j = 0; j < a.u.cols(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.u.rows(); ++i)
      if (std::abs(a.u(i, j)) > std::abs(best)) best = a.u(i, j);
    CHECK(best > 0.0);
  }
}

TEST_CASE("svd handles the zero matrix") {
  const Matrix z(3, 2);
  const SvdResult dec = svd(z);
  for (double s : dec.sigma) CHECK(s == 0.0);
  CHECK(orthonormality_error(dec.u) < 1e-12);
}

TEST_CASE("pinv trivial cases") {
  CHECK(max_abs_diff(pinv(Matrix::identity(4)), Matrix::identity(4)) < 1e-12);
  const Matrix d(2, 2, {2.0, 0.0, 0.0, 0.0});
  const Matrix p = pinv(d);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(p(1, 1)) < 1e-12);
}

TEST_CASE("pinv of a full-rank matrix is its inverse") {
  Rng rng(53);
  const Matrix m = random_spd(rng, 8);  // comfortably conditioned
  CHECK(max_abs_diff(multiply(pinv(m), m), Matrix::identity(8)) < 1e-8);
}

TEST_CASE("Penrose conditions hold across ranks 1..8") {
  Rng rng(59);
  for (std::size_t rank = 1; rank <= 8; ++rank) {
    const Matrix m = random_rank(rng, 8, rank);
    const Matrix p = pinv(m);
    CHECK(max_abs_diff(multiply(multiply(m, p), m), m) < 1e-8);
    CHECK(max_abs_diff(multiply(multiply(p, m), p), p) < 1e-8);
    const Matrix mp = multiply(m, p);
    const Matrix pm = multiply(p, m);
    CHECK(max_abs_diff(mp, transpose(mp)) < 1e-8);
    CHECK(max_abs_diff(pm, transpose(pm)) < 1e-8);
  }
}

TEST_CASE("determinant basics") {
  CHECK(determinant(Matrix::identity(5)) == doctest::Approx(1.0));
  const Matrix m(2, 2, {2.0, 1.0, 1.0, 2.0});
  CHECK(determinant(m) == doctest::Approx(3.0));
  const Matrix sing(2, 2, {1.0, 2.0, 2.0, 4.0});
  CHECK(determinant(sing) == doctest::Approx(0.0));
}
