#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emgalign/features.hpp"
#include "emgalign/matrix.hpp"

namespace emgalign {

/// Synthetic gesture geometry: cluster centers in RMS feature space plus the
/// session protocol counts. Prototypes are kept at least 6·within_std apart
/// so the reference day is separable by construction.
struct GestureGeometry {
  std::size_t n_channels = 8;
  std::size_t n_gestures = 8;
  Matrix prototypes;  // n_gestures × n_channels
  double within_std = 0.25;
  std::size_t reps_per_gesture = 8;
  std::size_t windows_per_rep = 28;
};

/// Sample prototypes uniformly in [1, 5] per channel, resampling (bounded)
/// until the pairwise separation invariant holds; validates all invariants.
GestureGeometry make_geometry(std::size_t channels, std::size_t gestures,
                              double within_std, std::size_t reps_per_gesture,
                              std::size_t windows_per_rep, std::uint64_t seed);

void validate_geometry(const GestureGeometry& geom);

enum class DriftKind { Rotation, GeneralLinear, Gain, OffsetOnly };

DriftKind drift_kind_from_string(const std::string& name);
std::string to_string(DriftKind kind);

/// Ground-truth session transformation: x ↦ mixing·x + offset (+ noise).
struct DriftSpec {
  Matrix mixing;               // n×n, |det| > 1e-6
  std::vector<double> offset;  // length n
  double noise_std = 0.0;
  std::string day_id;
};

/// Construct a drift of the given family. magnitude 0 is always the identity
/// (zero offset). Resampling against the determinant floor is bounded at 100
/// attempts. noise_std and day_id are left for the caller to fill in.
DriftSpec make_drift(DriftKind kind, double magnitude, std::uint64_t seed, std::size_t n = 8);

/// Reference day: window (g, r, k) = prototype_g + N(0, within_std²·I),
/// clipped at 0 so features stay valid RMS values. Deterministic given seed.
LabeledWindows gen_reference(const GestureGeometry& geom, std::uint64_t seed);

/// Apply the drift column-wise: mixing·x + offset + N(0, noise_std²·I).
/// Labels, repetition indices and window count are preserved; values are NOT
/// clipped (clipping would corrupt the linear-drift oracle).
LabeledWindows apply_drift(const LabeledWindows& ref, const DriftSpec& spec,
                           std::uint64_t seed);

/// Analytic inverse of a noiseless drift (the simulator's oracle).
LabeledWindows invert_drift(const LabeledWindows& drifted, const DriftSpec& spec);

}  // namespace emgalign
