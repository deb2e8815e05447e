// emgalign CLI: simulate / train / calibrate / evaluate / report /
// run-experiment. See README.md for a walkthrough.

#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emgalign/cca.hpp"
#include "emgalign/drift.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/experiment.hpp"
#include "emgalign/kernels.hpp"
#include "emgalign/svm.hpp"

namespace {

using namespace emgalign;

LabeledWindows pick_day(const std::vector<LabeledWindows>& days, std::size_t day_1based,
                        const std::string& what) {
  if (day_1based < 1 || day_1based > days.size())
    throw ConfigError(what + ": day " + std::to_string(day_1based) + " outside 1.." +
                      std::to_string(days.size()));
  return days[day_1based - 1];
}

/// Windows whose (gesture, repetition) is outside the first
/// `calibration_reps` repetitions of each gesture.
std::vector<std::size_t> non_calibration_windows(const LabeledWindows& day,
                                                 std::size_t calibration_reps) {
  std::set<std::pair<int, int>> calib;
  const std::size_t gestures = gesture_count(day);
  for (std::size_t g = 0; g < gestures; ++g) {
    const auto reps = repetitions_of(day, static_cast<int>(g));
    for (std::size_t k = 0; k < std::min(calibration_reps, reps.size()); ++k)
      calib.insert({static_cast<int>(g), reps[k]});
  }
  return windows_where(
      day, [&](int lab, int rep) { return !calib.contains({lab, rep}); });
}

int run(int argc, char** argv) {
  CLI::App app{"emgalign: multi-session gesture feature alignment via CCA"};
  app.require_subcommand(1);

  bool serial = false;
  app.add_flag("--serial", serial, "Force serial kernels (no OpenMP)");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic multi-day dataset");
  ExperimentConfig sim_cfg;
  std::string sim_out;
  sim->add_option("--out", sim_out, "Output dataset root")->required();
  sim->add_option("--days", sim_cfg.days, "Number of days");
  std::string sim_drift = "rotation";
  sim->add_option("--drift", sim_drift, "rotation|general-linear|gain|offset-only");
  sim->add_option("--magnitude", sim_cfg.magnitude, "Drift magnitude");
  sim->add_option("--noise-std", sim_cfg.noise_std, "Per-day additive noise sigma");
  sim->add_option("--seed", sim_cfg.seed, "Base seed");
  sim->add_option("--channels", sim_cfg.geometry.n_channels, "Channels");
  sim->add_option("--gestures", sim_cfg.geometry.n_gestures, "Gestures");
  sim->add_option("--reps", sim_cfg.geometry.reps_per_gesture, "Repetitions per gesture");
  sim->add_option("--windows-per-rep", sim_cfg.geometry.windows_per_rep,
                  "Feature windows per repetition");
  sim->add_option("--within-std", sim_cfg.geometry.within_std, "Within-cluster sigma");

  // ---- train ----
  auto* train = app.add_subcommand("train", "Train the reference-day classifier");
  std::string train_data, train_out = "model.csv";
  std::size_t train_day = 1;
  int train_sessions = 1;
  bool train_all = false;
  SvmTrainOptions train_opts;
  train->add_option("--data", train_data, "Dataset root")->required();
  train->add_option("--day", train_day, "1-based day to train on");
  train->add_option("--out", train_out, "Model file path");
  train->add_option("--reg-c", train_opts.reg_c, "Soft-margin C");
  train->add_option("--epochs", train_opts.epochs, "Training epochs");
  train->add_option("--seed", train_opts.seed, "Training seed");
  train->add_option("--sessions-per-day", train_sessions, "Merge k sessions per day");
  train->add_flag("--train-all", train_all, "Use every repetition (skip held-out split)");

  // ---- calibrate ----
  auto* cal = app.add_subcommand("calibrate", "Fit a CCA mapping for one day");
  std::string cal_data, cal_out = "mapping.csv";
  std::size_t cal_ref_day = 1, cal_day = 2, cal_reps = 2;
  int cal_sessions = 1;
  double cal_ridge = CcaOptions{}.ridge;
  cal->add_option("--data", cal_data, "Dataset root")->required();
  cal->add_option("--ref-day", cal_ref_day, "Reference day (1-based)");
  cal->add_option("--day", cal_day, "Day to calibrate (1-based)")->required();
  cal->add_option("--reps", cal_reps, "Calibration repetitions per gesture");
  cal->add_option("--ridge", cal_ridge, "Covariance ridge (relative)");
  cal->add_option("--out", cal_out, "Mapping file path");
  cal->add_option("--sessions-per-day", cal_sessions, "Merge k sessions per day");

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate", "Score a model on one day");
  std::string ev_data, ev_model, ev_mapping;
  std::size_t ev_day = 2, ev_exclude = 2;
  int ev_sessions = 1;
  ev->add_option("--data", ev_data, "Dataset root")->required();
  ev->add_option("--day", ev_day, "Day to evaluate (1-based)")->required();
  ev->add_option("--model", ev_model, "Model file")->required();
  ev->add_option("--mapping", ev_mapping, "Optional CCA mapping file");
  ev->add_option("--exclude-calibration", ev_exclude,
                 "Exclude the first k repetitions per gesture (0 = keep all)");
  ev->add_option("--sessions-per-day", ev_sessions, "Merge k sessions per day");

  // ---- report ----
  auto* rep = app.add_subcommand("report", "Re-render summary.svg from summary.csv");
  std::string rep_summary, rep_out;
  rep->add_option("--summary", rep_summary, "Path to summary.csv")->required();
  rep->add_option("--out", rep_out, "Output directory")->required();

  // ---- run-experiment ----
  auto* run = app.add_subcommand("run-experiment", "Full multi-day experiment");
  std::string run_config, run_out, run_drift, run_data;
  ExperimentConfig run_cfg;
  auto* o_days = run->add_option("--days", run_cfg.days, "Number of days");
  auto* o_drift = run->add_option("--drift", run_drift,
                                  "rotation|general-linear|gain|offset-only");
  auto* o_mag = run->add_option("--magnitude", run_cfg.magnitude, "Drift magnitude");
  auto* o_noise = run->add_option("--noise-std", run_cfg.noise_std, "Additive noise sigma");
  auto* o_creps = run->add_option("--calibration-reps", run_cfg.calibration_reps,
                                  "Calibration repetitions per gesture");
  auto* o_seed = run->add_option("--seed", run_cfg.seed, "Base seed");
  auto* o_ridge = run->add_option("--ridge", run_cfg.ridge, "Covariance ridge (relative)");
  auto* o_regc = run->add_option("--reg-c", run_cfg.svm_reg_c, "Soft-margin C");
  auto* o_epochs = run->add_option("--epochs", run_cfg.svm_epochs, "SVM epochs");
  auto* o_sess = run->add_option("--sessions-per-day", run_cfg.sessions_per_day,
                                 "Merge k sessions per day (real data)");
  auto* o_data = run->add_option("--data", run_data, "Load days from this dataset root");
  run->add_option("--config", run_config, "JSON config file (flags override)");
  run->add_option("--out", run_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (serial) kernels::set_default_exec(kernels::Exec::Serial);

  if (sim->parsed()) {
    sim_cfg.drift_kind = drift_kind_from_string(sim_drift);
    write_synthetic_dataset(sim_cfg, sim_out);
    std::printf("wrote %zu days under %s\n", sim_cfg.days, sim_out.c_str());
    return 0;
  }

  if (train->parsed()) {
    const auto days = load_dataset(train_data, train_sessions);
    const LabeledWindows day = pick_day(days, train_day, "train");
    SvmModel model;
    if (train_all) {
      model = svm_train(day, train_opts);
      std::printf("trained on %zu windows (all repetitions)\n", day.windows());
    } else {
      const RepSplit split = split_by_repetition(day);
      const LabeledWindows tr = select_windows(day, split.train_windows);
      const LabeledWindows te = select_windows(day, split.test_windows);
      model = svm_train(tr, train_opts);
      const double acc = accuracy(svm_predict(model, te), te.labels);
      std::printf("trained on %zu windows, held-out accuracy %.4f (%zu windows)\n",
                  tr.windows(), acc, te.windows());
    }
    save_model_csv(model, train_out);
    std::printf("model written to %s\n", train_out.c_str());
    return 0;
  }

  if (cal->parsed()) {
    const auto days = load_dataset(cal_data, cal_sessions);
    const LabeledWindows ref = pick_day(days, cal_ref_day, "calibrate");
    const LabeledWindows day = pick_day(days, cal_day, "calibrate");
    const CalibrationPair pair = calibration_subset(ref, day, cal_reps);
    const CcaMapping map =
        cca_fit(pair.ref, pair.novel, CcaOptions{.ridge = cal_ridge, .center = true});
    const CorrelationMetrics corr = correlation_metrics(pair.ref, pair.novel, map);
    save_mapping_csv(map, cal_out);
    std::printf("calibrated day %zu against day %zu on %zu paired windows\n", cal_day,
                cal_ref_day, pair.ref.cols());
    std::printf("mean canonical correlation %.4f (unaligned %.4f, gain %.4f)\n",
                corr.aligned, corr.unaligned, corr.gain);
    std::printf("mapping written to %s\n", cal_out.c_str());
    return 0;
  }

  if (ev->parsed()) {
    const auto days = load_dataset(ev_data, ev_sessions);
    const LabeledWindows day = pick_day(days, ev_day, "evaluate");
    const SvmModel model = load_model_csv(ev_model);
    std::vector<std::size_t> idx;
    if (ev_exclude > 0)
      idx = non_calibration_windows(day, ev_exclude);
    else
      for (std::size_t w = 0; w < day.windows(); ++w) idx.push_back(w);
    const LabeledWindows eval_set = select_windows(day, idx);
    const double raw_acc = accuracy(svm_predict(model, eval_set), eval_set.labels);
    std::printf("day %zu, %zu evaluation windows\n", ev_day, eval_set.windows());
    std::printf("accuracy (unaligned): %.4f\n", raw_acc);
    if (!ev_mapping.empty()) {
      const CcaMapping map = load_mapping_csv(ev_mapping);
      const LabeledWindows projected = cca_project(map, eval_set);
      const double aligned_acc = accuracy(svm_predict(model, projected), projected.labels);
      std::printf("accuracy (aligned):   %.4f\n", aligned_acc);
    }
    return 0;
  }

  if (rep->parsed()) {
    const auto reports = load_summary_csv(rep_summary);
    emit_report(reports, rep_out);
    std::printf("report written to %s\n", rep_out.c_str());
    return 0;
  }

  if (run->parsed()) {
    ExperimentConfig cfg;
    if (!run_config.empty()) cfg = load_config_json(run_config);
    // flags override the config file
    if (o_days->count()) cfg.days = run_cfg.days;
    if (o_drift->count()) cfg.drift_kind = drift_kind_from_string(run_drift);
    if (o_mag->count()) cfg.magnitude = run_cfg.magnitude;
    if (o_noise->count()) cfg.noise_std = run_cfg.noise_std;
    if (o_creps->count()) cfg.calibration_reps = run_cfg.calibration_reps;
    if (o_seed->count()) cfg.seed = run_cfg.seed;
    if (o_ridge->count()) cfg.ridge = run_cfg.ridge;
    if (o_regc->count()) cfg.svm_reg_c = run_cfg.svm_reg_c;
    if (o_epochs->count()) cfg.svm_epochs = run_cfg.svm_epochs;
    if (o_sess->count()) cfg.sessions_per_day = run_cfg.sessions_per_day;
    if (o_data->count()) cfg.data_root = run_data;
    cfg.out_dir = run_out;

    const ExperimentResult result = run_experiment(cfg);
    const std::filesystem::path out = run_out;
    emit_report(result.reports, out);
    save_model_csv(result.model, out / "model.csv");
    for (std::size_t i = 0; i < result.mappings.size(); ++i)
      save_mapping_csv(result.mappings[i],
                       out / ("mapping_day" + std::to_string(result.reports[i].day_id) +
                              ".csv"));
    write_run_metadata(cfg, result, out);

    std::printf("reference accuracy %.4f, within-day correlation bound %.4f\n",
                result.acc_reference, result.within_day_upper_bound);
    std::printf("%-5s %12s %12s %12s %12s %10s\n", "day", "corr_align", "corr_unalign",
                "acc_unalign", "acc_align", "rel_acc");
    for (const auto& r : result.reports)
      std::printf("%-5d %12.4f %12.4f %12.4f %12.4f %10.4f\n", r.day_id, r.corr_aligned,
                  r.corr_unaligned, r.acc_unaligned, r.acc_aligned, r.relative_accuracy);
    std::printf("outputs written to %s\n", run_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const emgalign::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 2;
  }
}
