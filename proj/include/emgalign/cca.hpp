#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "emgalign/features.hpp"
#include "emgalign/matrix.hpp"

namespace emgalign {

/// Fitted CCA alignment between a reference session and a new session.
///
/// Columns of `a` and `b` are the canonical directions for the reference and
/// new data; `correlations` holds the canonical correlations (descending,
/// clipped to [0,1]). The per-session means removed before fitting are stored
/// so projection can land in the reference session's affine feature space.
struct CcaMapping {
  Matrix a;  // n×m
  Matrix b;  // n×m
  std::vector<double> correlations;  // length m
  std::vector<double> mean_ref;      // length n
  std::vector<double> mean_new;      // length n
  double ridge = 0.0;

  std::size_t channels() const { return a.rows(); }
  std::size_t components() const { return a.cols(); }
};

struct CcaOptions {
  /// Relative ridge: eff = ridge · trace(C)/n is added to each covariance
  /// before the inverse square root. Raise for ill-conditioned data.
  double ridge = 1e-10;
  /// Center both inputs by their own means (projection adds the reference
  /// mean back). Disabling makes pure offset drift uncorrectable; exposed so
  /// that failure mode can be demonstrated.
  bool center = true;
};

/// Fit the mapping on column-paired calibration matrices (n×T each, same T).
/// All n canonical components are kept so the back-projection stays full rank.
CcaMapping cca_fit(const Matrix& ref_calib, const Matrix& new_calib,
                   const CcaOptions& opts = {});

/// Project new-session data into the reference feature space:
/// (Aᵀ)† · Bᵀ · (x − mean_new) + mean_ref, column-wise.
Matrix cca_project(const CcaMapping& map, const Matrix& new_day);
LabeledWindows cca_project(const CcaMapping& map, const LabeledWindows& new_day);

/// Column-paired calibration matrices drawn from two sessions.
struct CalibrationPair {
  Matrix ref;    // n×T, reference-session calibration columns
  Matrix novel;  // n×T, new-session calibration columns
  std::vector<std::size_t> ref_indices;  // window index into the reference day
  std::vector<std::size_t> new_indices;  // window index into the new day
  std::vector<int> ref_reps;             // repetition ids selected (per gesture order)
  std::vector<int> new_reps;
};

/// Select the first reps_per_gesture repetitions of every gesture from both
/// days, order windows by (gesture, repetition ordinal, window index) and
/// truncate each block pair to the shorter side so columns pair one-to-one.
CalibrationPair calibration_subset(const LabeledWindows& ref_day,
                                   const LabeledWindows& new_day,
                                   std::size_t reps_per_gesture = 2);

/// Flat CSV model file; 17-significant-digit decimals, bit-exact round-trip.
void save_mapping_csv(const CcaMapping& map, const std::filesystem::path& path);
CcaMapping load_mapping_csv(const std::filesystem::path& path);

}  // namespace emgalign
