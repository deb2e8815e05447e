#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "emgalign/cca.hpp"
#include "emgalign/drift.hpp"
#include "emgalign/features.hpp"
#include "emgalign/svm.hpp"

namespace emgalign {

struct ExperimentConfig {
  std::size_t days = 10;
  GestureGeometry geometry;  // prototypes generated from `seed` when empty
  DriftKind drift_kind = DriftKind::Rotation;
  double magnitude = 1.0;
  double noise_std = 0.0625;  // 0.25 · default within_std
  std::size_t calibration_reps = 2;
  double svm_reg_c = 1.0;
  std::size_t svm_epochs = 200;
  double ridge = 1e-10;
  std::uint64_t seed = 42;
  std::string out_dir;
  /// When set, days are loaded from this dataset root instead of simulated.
  std::string data_root;
  int sessions_per_day = 1;
};

void validate_config(const ExperimentConfig& cfg);

/// Per-day outcome; one row of summary.csv.
struct DayReport {
  int day_id = 0;
  double corr_aligned = 0.0;    // mean canonical correlation of the fit
  double corr_unaligned = 0.0;  // mean channel-wise Pearson on the raw pairing
  double corr_gain = 0.0;       // aligned − unaligned
  double acc_unaligned = 0.0;
  double acc_aligned = 0.0;
  double acc_reference = 0.0;
  double relative_accuracy = 0.0;  // acc_aligned / acc_reference
  double acc_pooled = 0.0;         // all-days classifier baseline
};

/// Bookkeeping for the evaluation-hygiene audit: calibration windows must
/// never appear in an evaluation set.
struct DayAudit {
  int day_id = 0;
  std::vector<std::size_t> calibration_windows;
  std::vector<std::size_t> evaluation_windows;
};

struct ExperimentResult {
  std::vector<DayReport> reports;  // one per drifted day (2..days)
  std::vector<DayAudit> audits;
  double acc_reference = 0.0;
  double within_day_upper_bound = 0.0;  // half-split CCA on the reference day
  SvmModel model;
  std::vector<CcaMapping> mappings;  // parallel to reports
  std::vector<LabeledWindows> days;  // generated or loaded sessions
};

struct CorrelationMetrics {
  double aligned = 0.0;
  double unaligned = 0.0;
  double gain = 0.0;
};

/// aligned = mean canonical correlation; unaligned = mean over channels of
/// Pearson correlation between the paired raw channel time-courses (a
/// zero-variance channel counts as 0 with a warning on stderr).
CorrelationMetrics correlation_metrics(const Matrix& ref_calib, const Matrix& new_calib,
                                       const CcaMapping& mapping);

/// Mean canonical correlation between the two repetition halves of a day —
/// the within-day ceiling any across-day alignment is bounded by.
double within_day_upper_bound(const LabeledWindows& day, double ridge);

/// Train-day split by repetition: the last ceil(25%) repetitions of each
/// gesture are held out for testing.
struct RepSplit {
  std::vector<std::size_t> train_windows;
  std::vector<std::size_t> test_windows;
  std::vector<int> test_reps;  // repetition ids held out (per gesture max id order)
};
RepSplit split_by_repetition(const LabeledWindows& day);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Dataset manifest: structured JSON at the dataset root.
struct Manifest {
  std::vector<std::string> day_dirs;
  std::vector<std::string> gesture_names;
  std::string mode = "features";  // "features" or "raw"
  double sample_rate_hz = 4000.0;
  double notch_hz = 50.0;
  std::size_t notch_taps = 10;
  double bandpass_low_hz = 2.0;
  double bandpass_high_hz = 1000.0;
  std::size_t bandpass_taps = 15;
  double window_ms = 300.0;
  double slide_ms = 100.0;
};

Manifest load_manifest(const std::filesystem::path& root);
void save_manifest(const Manifest& m, const std::filesystem::path& root);

/// Load every day of a dataset, merging groups of sessions_per_day
/// consecutive manifest entries into one logical day.
std::vector<LabeledWindows> load_dataset(const std::filesystem::path& root,
                                         int sessions_per_day = 1);

/// Load one day directory. Feature mode reads features.csv (columns
/// window, ch0..ch{n-1}, label, repetition); raw mode reads raw.csv (columns
/// t, ch0..ch{n-1}, label, repetition, trial), filters it (notch + band-pass)
/// and extracts RMS features. Errors carry 1-based data row numbers.
LabeledWindows load_day(const std::filesystem::path& day_dir, const Manifest& manifest);

void save_day_csv(const LabeledWindows& day, const std::filesystem::path& day_dir);

/// Write summary.csv and summary.svg under out_dir.
void emit_report(const std::vector<DayReport>& reports, const std::filesystem::path& out_dir);

std::vector<DayReport> load_summary_csv(const std::filesystem::path& path);

/// Synthetic day generation shared by run_experiment and `simulate`.
struct SyntheticDays {
  GestureGeometry geometry;
  std::vector<LabeledWindows> days;
  std::vector<DriftSpec> specs;  // parallel to days[1..]
};
SyntheticDays generate_synthetic_days(const ExperimentConfig& cfg);

/// Materialize a full synthetic dataset (reference + drifted days + manifest
/// + per-day ground-truth drift files) under root.
void write_synthetic_dataset(const ExperimentConfig& cfg, const std::filesystem::path& root);

/// JSON config file; unknown keys are rejected so typos surface early.
ExperimentConfig load_config_json(const std::filesystem::path& path);

/// run_meta.json: config echo, explicit seeds, reference accuracy and the
/// within-day correlation upper bound. Deterministic content (no timestamps).
void write_run_metadata(const ExperimentConfig& cfg, const ExperimentResult& result,
                        const std::filesystem::path& out_dir);

}  // namespace emgalign
