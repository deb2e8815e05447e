#include "emgalign/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/signal.hpp"

namespace emgalign {

namespace {

std::string day_name(std::size_t d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "day_%02zu", d);
  return buf;
}

double pearson(const Matrix& a, const Matrix& b, std::size_t row, bool& degenerate) {
  const std::size_t t = a.cols();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    ma += a(row, i);
    mb += b(row, i);
  }
  ma /= static_cast<double>(t);
  mb /= static_cast<double>(t);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const double da = a(row, i) - ma, db = b(row, i) - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    degenerate = true;
    return 0.0;
  }
  degenerate = false;
  return sab / std::sqrt(saa * sbb);
}

/// Collect (gesture, repetition) pairs selected for calibration on one day.
std::set<std::pair<int, int>> calibration_pairs(const CalibrationPair& cal,
                                                std::size_t gestures,
                                                std::size_t reps_per_gesture, bool new_side) {
  std::set<std::pair<int, int>> pairs;
  const auto& reps = new_side ? cal.new_reps : cal.ref_reps;
  for (std::size_t g = 0; g < gestures; ++g)
    for (std::size_t k = 0; k < reps_per_gesture; ++k)
      pairs.insert({static_cast<int>(g), reps[g * reps_per_gesture + k]});
  return pairs;
}

}  // namespace

SyntheticDays generate_synthetic_days(const ExperimentConfig& cfg) {
  SyntheticDays out;
  out.geometry = cfg.geometry;
  if (out.geometry.prototypes.empty())
    out.geometry = make_geometry(cfg.geometry.n_channels, cfg.geometry.n_gestures,
                                 cfg.geometry.within_std, cfg.geometry.reps_per_gesture,
                                 cfg.geometry.windows_per_rep, cfg.seed);
  out.days.push_back(gen_reference(out.geometry, cfg.seed));
  for (std::size_t d = 2; d <= cfg.days; ++d) {
    DriftSpec spec =
        make_drift(cfg.drift_kind, cfg.magnitude, cfg.seed + d, out.geometry.n_channels);
    spec.noise_std = cfg.noise_std;
    spec.day_id = day_name(d);
    out.days.push_back(apply_drift(out.days.front(), spec, cfg.seed + d));
    out.specs.push_back(std::move(spec));
  }
  return out;
}

std::vector<LabeledWindows> load_dataset(const std::filesystem::path& root,
                                         int sessions_per_day) {
  const Manifest manifest = load_manifest(root);
  if (manifest.day_dirs.empty()) throw ConfigError("manifest lists no day directories");
  const auto k = static_cast<std::size_t>(std::max(1, sessions_per_day));
  if (manifest.day_dirs.size() % k != 0)
    throw ConfigError("manifest day count " + std::to_string(manifest.day_dirs.size()) +
                      " is not a multiple of sessions-per-day " + std::to_string(k));
  std::vector<LabeledWindows> days;
  for (std::size_t base = 0; base < manifest.day_dirs.size(); base += k) {
    std::vector<LabeledWindows> sessions;
    for (std::size_t s = 0; s < k; ++s)
      sessions.push_back(load_day(root / manifest.day_dirs[base + s], manifest));
    days.push_back(merge_sessions(sessions, day_name(base / k + 1)));
  }
  return days;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.days < 2) throw ConfigError("config: need at least 2 days");
  if (cfg.calibration_reps < 1) throw ConfigError("config: calibration_reps must be >= 1");
  if (cfg.data_root.empty()) {
    if (cfg.calibration_reps > cfg.geometry.reps_per_gesture)
      throw ConfigError("config: calibration_reps " + std::to_string(cfg.calibration_reps) +
                        " exceeds repetitions per gesture " +
                        std::to_string(cfg.geometry.reps_per_gesture));
    if (cfg.calibration_reps == cfg.geometry.reps_per_gesture)
      throw ConfigError(
          "config: calibration_reps must leave at least one repetition for evaluation");
  }
  if (cfg.magnitude < 0.0) throw ConfigError("config: magnitude must be >= 0");
  if (cfg.noise_std < 0.0) throw ConfigError("config: noise_std must be >= 0");
  if (cfg.ridge < 0.0) throw ConfigError("config: ridge must be >= 0");
  if (cfg.svm_reg_c <= 0.0) throw ConfigError("config: svm reg_c must be > 0");
  if (cfg.svm_epochs < 1) throw ConfigError("config: svm epochs must be >= 1");
  if (cfg.sessions_per_day < 1) throw ConfigError("config: sessions_per_day must be >= 1");
}

CorrelationMetrics correlation_metrics(const Matrix& ref_calib, const Matrix& new_calib,
                                       const CcaMapping& mapping) {
  if (ref_calib.rows() != new_calib.rows() || ref_calib.cols() != new_calib.cols())
    throw DimensionError("correlation_metrics: calibration matrices must pair");
  CorrelationMetrics out;
  double total = 0.0;
  for (std::size_t c = 0; c < ref_calib.rows(); ++c) {
    bool degenerate = false;
    const double r = pearson(ref_calib, new_calib, c, degenerate);
    if (degenerate)
      std::fprintf(stderr,
                   "warning: channel %zu has zero variance; counting its correlation as 0\n",
                   c);
    total += r;
  }
  out.unaligned = total / static_cast<double>(ref_calib.rows());
  double aligned = 0.0;
  for (double s : mapping.correlations) aligned += s;
  out.aligned = aligned / static_cast<double>(mapping.correlations.size());
  out.gain = out.aligned - out.unaligned;
  return out;
}

double within_day_upper_bound(const LabeledWindows& day, double ridge) {
  const std::size_t gestures = gesture_count(day);
  std::vector<std::vector<double>> first_cols, second_cols;

  auto block_windows = [&](int gesture, int rep) {
    std::vector<std::size_t> idx;
    for (std::size_t w = 0; w < day.windows(); ++w)
      if (day.labels[w] == gesture && day.repetition[w] == rep) idx.push_back(w);
    return idx;
  };

  std::vector<std::vector<double>> left, right;
  for (std::size_t g = 0; g < gestures; ++g) {
    const auto reps = repetitions_of(day, static_cast<int>(g));
    const std::size_t half = reps.size() / 2;
    if (half == 0)
      throw CoverageError("within_day_upper_bound: gesture " + std::to_string(g) +
                          " has fewer than 2 repetitions");
    for (std::size_t k = 0; k < half; ++k) {
      const auto a = block_windows(static_cast<int>(g), reps[k]);
      const auto b = block_windows(static_cast<int>(g), reps[half + k]);
      const std::size_t take = std::min(a.size(), b.size());
      for (std::size_t i = 0; i < take; ++i) {
        left.push_back(column(day.features, a[i]));
        right.push_back(column(day.features, b[i]));
      }
    }
  }
  const CcaMapping map = cca_fit(from_columns(left), from_columns(right),
                                 CcaOptions{.ridge = ridge, .center = true});
  double mean = 0.0;
  for (double s : map.correlations) mean += s;
  return mean / static_cast<double>(map.correlations.size());
}

RepSplit split_by_repetition(const LabeledWindows& day) {
  const std::size_t gestures = gesture_count(day);
  RepSplit split;
  std::set<int> test_reps;
  std::set<std::pair<int, int>> test_blocks;
  for (std::size_t g = 0; g < gestures; ++g) {
    const auto reps = repetitions_of(day, static_cast<int>(g));
    if (reps.size() < 2)
      throw CoverageError("split_by_repetition: gesture " + std::to_string(g) +
                          " has fewer than 2 repetitions");
    const std::size_t test_count = std::max<std::size_t>(1, (reps.size() + 2) / 4);
    for (std::size_t k = reps.size() - test_count; k < reps.size(); ++k) {
      test_blocks.insert({static_cast<int>(g), reps[k]});
      test_reps.insert(reps[k]);
    }
  }
  for (std::size_t w = 0; w < day.windows(); ++w) {
    if (test_blocks.contains({day.labels[w], day.repetition[w]}))
      split.test_windows.push_back(w);
    else
      split.train_windows.push_back(w);
  }
  split.test_reps.assign(test_reps.begin(), test_reps.end());
  return split;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);

  ExperimentResult result;
  if (cfg.data_root.empty()) {
    result.days = generate_synthetic_days(cfg).days;
  } else {
    result.days = load_dataset(cfg.data_root, cfg.sessions_per_day);
    if (result.days.size() < 2)
      throw ConfigError("dataset provides fewer than 2 days");
  }

  const LabeledWindows& day1 = result.days.front();
  const std::size_t gestures = gesture_count(day1);

  const RepSplit ref_split = split_by_repetition(day1);
  const LabeledWindows train = select_windows(day1, ref_split.train_windows);
  const LabeledWindows test = select_windows(day1, ref_split.test_windows);

  const SvmTrainOptions svm_opts{cfg.svm_reg_c, cfg.svm_epochs, cfg.seed};
  result.model = svm_train(train, svm_opts);
  result.acc_reference = accuracy(svm_predict(result.model, test), test.labels);
  if (result.acc_reference <= 0.0)
    throw TrainingError("reference-day accuracy is zero; relative accuracy is undefined");
  result.within_day_upper_bound = within_day_upper_bound(day1, cfg.ridge);

  // Pooled baseline: one classifier over every day's training split.
  SvmModel pooled_model;
  {
    std::vector<std::vector<double>> cols;
    std::vector<int> labels, reps;
    for (const auto& day : result.days) {
      const RepSplit split = split_by_repetition(day);
      for (std::size_t w : split.train_windows) {
        cols.push_back(column(day.features, w));
        labels.push_back(day.labels[w]);
        reps.push_back(day.repetition[w]);
      }
    }
    const LabeledWindows pooled_train = make_labeled_windows(
        from_columns(cols), std::move(labels), std::move(reps), "pooled");
    pooled_model = svm_train(pooled_train, svm_opts);
  }

  // Day-1 audit row: its evaluation set is the held-out test split; its
  // calibration windows are the reference side of every later-day pairing.
  DayAudit ref_audit;
  ref_audit.day_id = 1;
  ref_audit.evaluation_windows = ref_split.test_windows;

  for (std::size_t di = 1; di < result.days.size(); ++di) {
    const LabeledWindows& day = result.days[di];
    const int day_id = static_cast<int>(di + 1);

    const CalibrationPair cal = calibration_subset(day1, day, cfg.calibration_reps);
    const CcaMapping mapping =
        cca_fit(cal.ref, cal.novel, CcaOptions{.ridge = cfg.ridge, .center = true});
    const CorrelationMetrics corr = correlation_metrics(cal.ref, cal.novel, mapping);

    const auto calib_blocks = calibration_pairs(cal, gestures, cfg.calibration_reps, true);
    const auto eval_idx = windows_where(day, [&](int lab, int rep) {
      return !calib_blocks.contains({lab, rep});
    });
    if (eval_idx.empty())
      throw ConfigError("day " + std::to_string(day_id) +
                        ": calibration consumed every repetition; nothing left to evaluate");

    const LabeledWindows eval_raw = select_windows(day, eval_idx);
    const LabeledWindows projected = cca_project(mapping, day);
    const LabeledWindows eval_aligned = select_windows(projected, eval_idx);

    DayReport report;
    report.day_id = day_id;
    report.corr_aligned = corr.aligned;
    report.corr_unaligned = corr.unaligned;
    report.corr_gain = corr.gain;
    report.acc_unaligned = accuracy(svm_predict(result.model, eval_raw), eval_raw.labels);
    report.acc_aligned =
        accuracy(svm_predict(result.model, eval_aligned), eval_aligned.labels);
    report.acc_reference = result.acc_reference;
    report.relative_accuracy = report.acc_aligned / result.acc_reference;
    {
      const RepSplit day_split = split_by_repetition(day);
      const LabeledWindows day_test = select_windows(day, day_split.test_windows);
      report.acc_pooled = accuracy(svm_predict(pooled_model, day_test), day_test.labels);
    }

    DayAudit audit;
    audit.day_id = day_id;
    audit.calibration_windows = cal.new_indices;
    audit.evaluation_windows = eval_idx;
    result.audits.push_back(std::move(audit));
    ref_audit.calibration_windows.insert(ref_audit.calibration_windows.end(),
                                         cal.ref_indices.begin(), cal.ref_indices.end());

    result.reports.push_back(report);
    result.mappings.push_back(mapping);
  }

  std::sort(ref_audit.calibration_windows.begin(), ref_audit.calibration_windows.end());
  ref_audit.calibration_windows.erase(std::unique(ref_audit.calibration_windows.begin(),
                                                  ref_audit.calibration_windows.end()),
                                      ref_audit.calibration_windows.end());
  result.audits.insert(result.audits.begin(), std::move(ref_audit));
  return result;
}

}  // namespace emgalign
