#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "emgalign/cca.hpp"
#include "emgalign/drift.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/linalg.hpp"
#include "emgalign/rng.hpp"

using namespace emgalign;

namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = rng.normal();
  return m;
}

/// Random matrix with singular values in [0.5, 2]: invertible and benignly
/// conditioned, so invariance tolerances are meaningful.
Matrix random_conditioned(Rng& rng, std::size_t n) {
  const SvdResult a = svd(random_matrix(rng, n, n));
  const SvdResult b = svd(random_matrix(rng, n, n));
  Matrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = rng.uniform(0.5, 2.0);
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = s * b.vt(i, j);
  }
  return multiply(a.u, scaled);
}

Matrix random_rotation(Rng& rng, std::size_t n) {
  // QR-free: orthonormal factor from the SVD of a random matrix
  const SvdResult dec = svd(random_matrix(rng, n, n));
  return multiply(dec.u, dec.vt);
}

double max_corr_dev_from_one(const CcaMapping& map) {
  double worst = 0.0;
  for (double s : map.correlations) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

}  // namespace

TEST_CASE("self-alignment: correlations are 1 and the variates coincide") {
  Rng rng(101);
  const Matrix x = random_matrix(rng, 8, 100);
  const CcaMapping map = cca_fit(x, x, CcaOptions{.ridge = 0.0, .center = true});
  CHECK(max_corr_dev_from_one(map) < 1e-6);
  // AᵀX == BᵀX for identical inputs
  const Matrix ax = multiply(transpose(map.a), x);
  const Matrix bx = multiply(transpose(map.b), x);
  CHECK(max_abs_diff(ax, bx) < 1e-6);
}

TEST_CASE("orthogonal mixing leaves all canonical correlations at 1") {
  Rng rng(102);
  const Matrix x = random_matrix(rng, 8, 120);
  const Matrix y = multiply(random_rotation(rng, 8), x);
  const CcaMapping map = cca_fit(x, y, CcaOptions{.ridge = 0.0, .center = true});
  CHECK(max_corr_dev_from_one(map) < 1e-6);
}

TEST_CASE("correlations degrade monotonically as noise grows") {
  Rng rng(103);
  const Matrix x = random_matrix(rng, 8, 200);
  double previous = 2.0;
  for (const double noise : {0.1, 1.0, 10.0}) {
    Matrix y = x;
    for (std::size_t i = 0; i < y.rows() * y.cols(); ++i)
      y.data()[i] += noise * rng.normal();
    const CcaMapping map = cca_fit(x, y);
    double mean = 0.0;
    for (double s : map.correlations) mean += s;
    mean /= static_cast<double>(map.correlations.size());
    CHECK(mean < previous);
    previous = mean;
  }
  CHECK(previous < 0.3);  // SNR well below 1 leaves little correlation
}

TEST_CASE("unit variance of canonical variates") {
  Rng rng(104);
  const Matrix x = random_matrix(rng, 6, 150);
  const Matrix y = multiply(random_conditioned(rng, 6), x);
  const CcaMapping map = cca_fit(x, y);

  auto centered_cov = [](const Matrix& m) {
    std::vector<double> mu(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) mu[r] += m(r, c);
      mu[r] /= static_cast<double>(m.cols());
    }
    Matrix cc(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) cc(r, c) = m(r, c) - mu[r];
    return covariance(cc, cc);
  };
  const Matrix cxx = centered_cov(x);
  const Matrix cyy = centered_cov(y);
  for (std::size_t i = 0; i < map.components(); ++i) {
    double ax = 0.0, by = 0.0;
    for (std::size_t r = 0; r < map.channels(); ++r)
      for (std::size_t c = 0; c < map.channels(); ++c) {
        ax += map.a(r, i) * cxx(r, c) * map.a(c, i);
        by += map.b(r, i) * cyy(r, c) * map.b(c, i);
      }
    CHECK(ax == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(by == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("correlations are invariant under invertible channel mixes") {
  Rng rng(105);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix x = random_matrix(rng, 8, 100);
    const Matrix y = random_matrix(rng, 8, 100);
    const CcaMapping base = cca_fit(x, y, CcaOptions{.ridge = 0.0, .center = true});
    const Matrix px = multiply(random_conditioned(rng, 8), x);
    const Matrix qy = multiply(random_conditioned(rng, 8), y);
    const CcaMapping mixed = cca_fit(px, qy, CcaOptions{.ridge = 0.0, .center = true});
    for (std::size_t i = 0; i < base.correlations.size(); ++i)
      CHECK(std::abs(mixed.correlations[i] - base.correlations[i]) < 1e-6);
  }
}

TEST_CASE("correlations are symmetric in the argument order") {
  Rng rng(106);
  const Matrix x = random_matrix(rng, 8, 90);
  const Matrix y = random_matrix(rng, 8, 90);
  const CcaMapping xy = cca_fit(x, y, CcaOptions{.ridge = 0.0, .center = true});
  const CcaMapping yx = cca_fit(y, x, CcaOptions{.ridge = 0.0, .center = true});
  for (std::size_t i = 0; i < xy.correlations.size(); ++i)
    CHECK(std::abs(xy.correlations[i] - yx.correlations[i]) < 1e-8);
}

TEST_CASE("fit is deterministic down to the bit") {
  Rng rng(107);
  const Matrix x = random_matrix(rng, 8, 100);
  const Matrix y = random_matrix(rng, 8, 100);
  const CcaMapping m1 = cca_fit(x, y);
  const CcaMapping m2 = cca_fit(x, y);
  CHECK(m1.a == m2.a);
  CHECK(m1.b == m2.b);
  CHECK(m1.correlations == m2.correlations);
  CHECK(m1.mean_ref == m2.mean_ref);
}

TEST_CASE("projection recovers the reference on linearly drifted data") {
  Rng rng(108);
  const Matrix x = random_matrix(rng, 8, 120);

  SUBCASE("self-fit is the identity") {
    const CcaMapping map = cca_fit(x, x);
    CHECK(max_abs_diff(cca_project(map, x), x) < 1e-6);
  }
  SUBCASE("orthogonal drift") {
    const Matrix y = multiply(random_rotation(rng, 8), x);
    const CcaMapping map = cca_fit(x, y);
    CHECK(max_abs_diff(cca_project(map, y), x) < 1e-6);
  }
  SUBCASE("general invertible drift with offset") {
    const Matrix m = random_conditioned(rng, 8);
    Matrix y = multiply(m, x);
    for (std::size_t r = 0; r < 8; ++r) {
      const double off = rng.uniform(-2.0, 2.0);
      for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) += off;
    }
    const CcaMapping map = cca_fit(x, y);
    CHECK(max_abs_diff(cca_project(map, y), x) < 1e-6);
  }
}

TEST_CASE("pure offset drift: centering decides recovery") {
  Rng rng(109);
  const Matrix x = random_matrix(rng, 8, 120);
  Matrix y = x;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) += 3.0 + static_cast<double>(r);

  const CcaMapping centered = cca_fit(x, y, CcaOptions{.ridge = 1e-10, .center = true});
  CHECK(max_abs_diff(cca_project(centered, y), x) < 1e-6);

  const CcaMapping uncentered = cca_fit(x, y, CcaOptions{.ridge = 1e-10, .center = false});
  CHECK(max_abs_diff(cca_project(uncentered, y), x) > 0.1);
}

TEST_CASE("cca_fit rejects bad inputs") {
  Rng rng(110);
  const Matrix x = random_matrix(rng, 8, 50);
  CHECK_THROWS_AS(cca_fit(x, random_matrix(rng, 8, 49)), PairingError);
  CHECK_THROWS_AS(cca_fit(x, random_matrix(rng, 7, 50)), DimensionError);
  CHECK_THROWS_AS(cca_fit(random_matrix(rng, 8, 8), random_matrix(rng, 8, 8)),
                  ParameterError);  // needs T > n
  const CcaMapping map = cca_fit(x, x);
  CHECK_THROWS_AS(cca_project(map, random_matrix(rng, 7, 10)), DimensionError);
}

TEST_CASE("singular covariance reports a singularity error at zero ridge") {
  // one channel is constant: covariance rank-deficient
  Matrix x(3, 20);
  Rng rng(111);
  for (std::size_t c = 0; c < 20; ++c) {
    x(0, c) = rng.normal();
    x(1, c) = rng.normal();
    x(2, c) = 1.0;
  }
  CHECK_THROWS_AS(cca_fit(x, x, CcaOptions{.ridge = 0.0, .center = true}), SingularityError);
  // raising the ridge (the error's own advice) makes it fit
  CHECK_NOTHROW(cca_fit(x, x, CcaOptions{.ridge = 1e-6, .center = true}));
}

TEST_CASE("calibration_subset pairs blocks by position") {
  const GestureGeometry geom = make_geometry(8, 8, 0.25, 8, 28, 42);
  const LabeledWindows ref = gen_reference(geom, 42);
  DriftSpec spec = make_drift(DriftKind::Rotation, 0.5, 7);
  spec.day_id = "day_02";
  const LabeledWindows day = apply_drift(ref, spec, 7);

  const CalibrationPair pair = calibration_subset(ref, day, 2);
  CHECK(pair.ref.rows() == 8);
  CHECK(pair.ref.cols() == 8 * 2 * 28);  // gestures x reps x windows
  CHECK(pair.novel.cols() == pair.ref.cols());
  // selected repetitions are the first two of every gesture
  for (std::size_t g = 0; g < 8; ++g) {
    CHECK(pair.new_reps[g * 2] == 0);
    CHECK(pair.new_reps[g * 2 + 1] == 1);
  }

  SUBCASE("full selection uses every window") {
    // truncate one day's last block to force per-block pairing
    const CalibrationPair all = calibration_subset(ref, day, 8);
    CHECK(all.ref.cols() == ref.windows());
  }
  SUBCASE("missing gesture is a coverage error naming it") {
    const auto idx = windows_where(day, [](int lab, int) { return lab != 5; });
    const LabeledWindows truncated = select_windows(day, idx);
    try {
      calibration_subset(ref, truncated, 2);
      FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
      CHECK(std::string(e.what()).find('5') != std::string::npos);
    }
  }
  SUBCASE("insufficient repetitions is a coverage error naming the gesture") {
    const auto idx = windows_where(
        day, [](int lab, int rep) { return !(lab == 5 && rep > 0); });
    const LabeledWindows thin = select_windows(day, idx);
    try {
      calibration_subset(ref, thin, 2);
      FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
      CHECK(std::string(e.what()).find('5') != std::string::npos);
    }
  }
}

TEST_CASE("per-block truncation pairs ragged blocks one-to-one") {
  // ref has 3 windows per (gesture, rep); day has 2
  Matrix rf(2, 12), df(2, 8);
  std::vector<int> rl, rr, dl, dr;
  std::size_t col = 0;
  for (int g = 0; g < 2; ++g)
    for (int rep = 0; rep < 2; ++rep)
      for (int k = 0; k < 3; ++k, ++col) {
        rf(0, col) = g;
        rf(1, col) = k;
        rl.push_back(g);
        rr.push_back(rep);
      }
  col = 0;
  for (int g = 0; g < 2; ++g)
    for (int rep = 0; rep < 2; ++rep)
      for (int k = 0; k < 2; ++k, ++col) {
        df(0, col) = g + 10;
        df(1, col) = k;
        dl.push_back(g);
        dr.push_back(rep);
      }
  const LabeledWindows ref = make_labeled_windows(rf, rl, rr, "a");
  const LabeledWindows day = make_labeled_windows(df, dl, dr, "b");
  const CalibrationPair pair = calibration_subset(ref, day, 2);
  CHECK(pair.ref.cols() == 8);  // 2 gestures x 2 reps x min(3,2)
  for (std::size_t i = 0; i < pair.ref.cols(); ++i)
    CHECK(pair.ref(1, i) == pair.novel(1, i));  // window ordinals line up
}

TEST_CASE("mapping CSV round-trip is bit-exact") {
  Rng rng(112);
  const Matrix x = random_matrix(rng, 8, 60);
  const Matrix y = multiply(random_conditioned(rng, 8), x);
  const CcaMapping map = cca_fit(x, y);
  const auto path = std::filesystem::temp_directory_path() / "emgalign_map_test.csv";
  save_mapping_csv(map, path);
  const CcaMapping loaded = load_mapping_csv(path);
  CHECK(loaded.a == map.a);
  CHECK(loaded.b == map.b);
  CHECK(loaded.correlations == map.correlations);
  CHECK(loaded.mean_ref == map.mean_ref);
  CHECK(loaded.mean_new == map.mean_new);
  CHECK(loaded.ridge == map.ridge);
  std::filesystem::remove(path);
}
