// Dataset serialization: manifest, per-day CSV files, experiment config and
// run metadata. JSON carries the structured pieces; the numeric tables are
// plain CSV with 17-significant-digit decimals.

#include <cmath>
#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/experiment.hpp"
#include "emgalign/signal.hpp"

namespace emgalign {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
  return j;
}

std::vector<std::string> expected_feature_header(std::size_t channels) {
  std::vector<std::string> h{"window"};
  for (std::size_t c = 0; c < channels; ++c) h.push_back("ch" + std::to_string(c));
  h.push_back("label");
  h.push_back("repetition");
  return h;
}

/// Count ch0..chN columns and validate the fixed prefix/suffix layout.
std::size_t parse_header(const std::vector<std::string>& fields,
                         const std::vector<std::string>& prefix,
                         const std::vector<std::string>& suffix, const std::string& ctx) {
  // name genuinely absent required columns before any positional complaint
  auto present = [&](const std::string& name) {
    for (const auto& f : fields)
      if (f == name) return true;
    return false;
  };
  for (const auto& name : prefix)
    if (!present(name)) throw IngestError(ctx + ": missing column '" + name + "'");
  for (const auto& name : suffix)
    if (!present(name)) throw IngestError(ctx + ": missing column '" + name + "'");

  if (fields.size() < prefix.size() + suffix.size() + 1)
    throw IngestError(ctx + ": header has too few columns");
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (fields[i] != prefix[i])
      throw IngestError(ctx + ": expected column '" + prefix[i] + "' at position " +
                        std::to_string(i + 1) + ", found '" + fields[i] + "'");
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    const std::size_t at = fields.size() - suffix.size() + i;
    if (fields[at] != suffix[i])
      throw IngestError(ctx + ": expected column '" + suffix[i] + "' at position " +
                        std::to_string(at + 1) + ", found '" + fields[at] + "'");
  }
  const std::size_t channels = fields.size() - prefix.size() - suffix.size();
  for (std::size_t c = 0; c < channels; ++c) {
    if (fields[prefix.size() + c] != "ch" + std::to_string(c))
      throw IngestError(ctx + ": expected column ch" + std::to_string(c) + ", found '" +
                        fields[prefix.size() + c] + "'");
  }
  return channels;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& root) {
  const json j = read_json(root / "manifest.json");
  Manifest m;
  try {
    m.day_dirs = j.at("days").get<std::vector<std::string>>();
    if (j.contains("gestures"))
      m.gesture_names = j.at("gestures").get<std::vector<std::string>>();
    if (j.contains("mode")) m.mode = j.at("mode").get<std::string>();
    if (j.contains("sample_rate_hz")) m.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    if (j.contains("notch_hz")) m.notch_hz = j.at("notch_hz").get<double>();
    if (j.contains("notch_taps")) m.notch_taps = j.at("notch_taps").get<std::size_t>();
    if (j.contains("bandpass_low_hz"))
      m.bandpass_low_hz = j.at("bandpass_low_hz").get<double>();
    if (j.contains("bandpass_high_hz"))
      m.bandpass_high_hz = j.at("bandpass_high_hz").get<double>();
    if (j.contains("bandpass_taps")) m.bandpass_taps = j.at("bandpass_taps").get<std::size_t>();
    if (j.contains("window_ms")) m.window_ms = j.at("window_ms").get<double>();
    if (j.contains("slide_ms")) m.slide_ms = j.at("slide_ms").get<double>();
  } catch (const json::exception& e) {
    throw IngestError(root.string() + "/manifest.json: " + e.what());
  }
  if (m.mode != "features" && m.mode != "raw")
    throw IngestError(root.string() + "/manifest.json: mode must be 'features' or 'raw'");
  return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& root) {
  json j;
  j["days"] = m.day_dirs;
  j["gestures"] = m.gesture_names;
  j["mode"] = m.mode;
  j["sample_rate_hz"] = m.sample_rate_hz;
  j["notch_hz"] = m.notch_hz;
  j["notch_taps"] = m.notch_taps;
  j["bandpass_low_hz"] = m.bandpass_low_hz;
  j["bandpass_high_hz"] = m.bandpass_high_hz;
  j["bandpass_taps"] = m.bandpass_taps;
  j["window_ms"] = m.window_ms;
  j["slide_ms"] = m.slide_ms;
  csv::write_file(root / "manifest.json", j.dump(2) + "\n");
}

namespace {

LabeledWindows load_feature_day(const std::filesystem::path& file) {
  const auto lines = csv::read_lines(file);
  if (lines.empty()) throw IngestError(file.string() + ": empty file (header required)");
  const std::size_t channels =
      parse_header(csv::split(lines[0]), {"window"}, {"label", "repetition"}, file.string());

  std::vector<std::vector<double>> cols;
  std::vector<int> labels, reps;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t row = i;  // 1-based data row (header is line 1)
    const auto f = csv::split(lines[i]);
    if (f.size() != channels + 3)
      throw IngestError(file.string() + ": row " + std::to_string(row) + " has " +
                        std::to_string(f.size()) + " fields, expected " +
                        std::to_string(channels + 3));
    std::vector<double> col(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      col[c] = csv::parse_double(
          f[1 + c], file.string() + " column ch" + std::to_string(c) + ", row " +
                        std::to_string(row));
    }
    cols.push_back(std::move(col));
    labels.push_back(static_cast<int>(csv::parse_long(
        f[channels + 1], file.string() + " label, row " + std::to_string(row))));
    reps.push_back(static_cast<int>(csv::parse_long(
        f[channels + 2], file.string() + " repetition, row " + std::to_string(row))));
  }
  if (cols.empty()) throw IngestError(file.string() + ": no data rows");
  return make_labeled_windows(from_columns(cols), std::move(labels), std::move(reps),
                              file.parent_path().filename().string());
}

LabeledWindows load_raw_day(const std::filesystem::path& file, const Manifest& man) {
  const auto lines = csv::read_lines(file);
  if (lines.empty()) throw IngestError(file.string() + ": empty file (header required)");
  const std::size_t channels = parse_header(csv::split(lines[0]), {"t"},
                                            {"label", "repetition", "trial"}, file.string());

  std::vector<std::vector<double>> cols;
  SampleAnnotations ann;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t row = i;
    const auto f = csv::split(lines[i]);
    if (f.size() != channels + 4)
      throw IngestError(file.string() + ": row " + std::to_string(row) + " has " +
                        std::to_string(f.size()) + " fields, expected " +
                        std::to_string(channels + 4));
    std::vector<double> col(channels);
    for (std::size_t c = 0; c < channels; ++c)
      col[c] = csv::parse_double(f[1 + c], file.string() + " column ch" + std::to_string(c) +
                                               ", row " + std::to_string(row));
    cols.push_back(std::move(col));
    const std::string ctx = file.string() + ", row " + std::to_string(row);
    ann.label.push_back(static_cast<int>(csv::parse_long(f[channels + 1], ctx)));
    ann.repetition.push_back(static_cast<int>(csv::parse_long(f[channels + 2], ctx)));
    ann.trial.push_back(static_cast<int>(csv::parse_long(f[channels + 3], ctx)));
  }
  if (cols.empty()) throw IngestError(file.string() + ": no data rows");

  SignalMatrix raw = make_signal(from_columns(cols), man.sample_rate_hz);
  const FirFilter notch =
      design_notch(man.notch_hz, man.sample_rate_hz, man.notch_taps);
  const FirFilter band = design_bandpass(man.bandpass_low_hz, man.bandpass_high_hz,
                                         man.sample_rate_hz, man.bandpass_taps);
  const SignalMatrix filtered = apply_filter(band, apply_filter(notch, raw));
  return rms_features(filtered, man.window_ms, man.slide_ms, ann,
                      file.parent_path().filename().string());
}

}  // namespace

LabeledWindows load_day(const std::filesystem::path& day_dir, const Manifest& manifest) {
  LabeledWindows day = manifest.mode == "raw"
                           ? load_raw_day(day_dir / "raw.csv", manifest)
                           : load_feature_day(day_dir / "features.csv");
  gesture_count(day);  // labels must form a contiguous 0..G-1 set
  return day;
}

void save_day_csv(const LabeledWindows& day, const std::filesystem::path& day_dir) {
  std::string text = csv::join(expected_feature_header(day.channels())) + "\n";
  for (std::size_t w = 0; w < day.windows(); ++w) {
    text += std::to_string(w);
    for (std::size_t c = 0; c < day.channels(); ++c)
      text += ',' + csv::format(day.features(c, w));
    text += ',' + std::to_string(day.labels[w]);
    text += ',' + std::to_string(day.repetition[w]);
    text += '\n';
  }
  csv::write_file(day_dir / "features.csv", text);
}

void write_synthetic_dataset(const ExperimentConfig& cfg, const std::filesystem::path& root) {
  validate_config(cfg);
  const SyntheticDays synth = generate_synthetic_days(cfg);

  Manifest manifest;
  manifest.mode = "features";
  for (std::size_t g = 0; g < synth.geometry.n_gestures; ++g)
    manifest.gesture_names.push_back("gesture_" + std::to_string(g));
  for (std::size_t d = 0; d < synth.days.size(); ++d) {
    const std::string name = synth.days[d].day_id;
    manifest.day_dirs.push_back(name);
    save_day_csv(synth.days[d], root / name);
    if (d > 0) {
      // ground-truth transform so downstream oracles can invert the drift
      const DriftSpec& spec = synth.specs[d - 1];
      std::string text = "noise_std," + csv::format(spec.noise_std) + "\n";
      for (std::size_t r = 0; r < spec.mixing.rows(); ++r) {
        for (std::size_t c = 0; c < spec.mixing.cols(); ++c) {
          if (c) text += ',';
          text += csv::format(spec.mixing(r, c));
        }
        text += '\n';
      }
      for (std::size_t i = 0; i < spec.offset.size(); ++i) {
        if (i) text += ',';
        text += csv::format(spec.offset[i]);
      }
      text += '\n';
      csv::write_file(root / name / "drift_truth.csv", text);
    }
  }
  save_manifest(manifest, root);
}

ExperimentConfig load_config_json(const std::filesystem::path& path) {
  const json j = read_json(path);
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "days") cfg.days = value.get<std::size_t>();
      else if (key == "drift") cfg.drift_kind = drift_kind_from_string(value.get<std::string>());
      else if (key == "magnitude") cfg.magnitude = value.get<double>();
      else if (key == "noise_std") cfg.noise_std = value.get<double>();
      else if (key == "calibration_reps") cfg.calibration_reps = value.get<std::size_t>();
      else if (key == "svm_reg_c") cfg.svm_reg_c = value.get<double>();
      else if (key == "svm_epochs") cfg.svm_epochs = value.get<std::size_t>();
      else if (key == "ridge") cfg.ridge = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "data_root") cfg.data_root = value.get<std::string>();
      else if (key == "sessions_per_day") cfg.sessions_per_day = value.get<int>();
      else if (key == "channels") cfg.geometry.n_channels = value.get<std::size_t>();
      else if (key == "gestures") cfg.geometry.n_gestures = value.get<std::size_t>();
      else if (key == "within_std") cfg.geometry.within_std = value.get<double>();
      else if (key == "reps_per_gesture") cfg.geometry.reps_per_gesture = value.get<std::size_t>();
      else if (key == "windows_per_rep") cfg.geometry.windows_per_rep = value.get<std::size_t>();
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return cfg;
}

void write_run_metadata(const ExperimentConfig& cfg, const ExperimentResult& result,
                        const std::filesystem::path& out_dir) {
  json j;
  j["config"]["days"] = cfg.days;
  j["config"]["drift"] = to_string(cfg.drift_kind);
  j["config"]["magnitude"] = cfg.magnitude;
  j["config"]["noise_std"] = cfg.noise_std;
  j["config"]["calibration_reps"] = cfg.calibration_reps;
  j["config"]["svm_reg_c"] = cfg.svm_reg_c;
  j["config"]["svm_epochs"] = cfg.svm_epochs;
  j["config"]["ridge"] = cfg.ridge;
  j["config"]["seed"] = cfg.seed;
  j["config"]["sessions_per_day"] = cfg.sessions_per_day;
  if (!cfg.data_root.empty()) j["config"]["data_root"] = cfg.data_root;
  j["config"]["channels"] = cfg.geometry.n_channels;
  j["config"]["gestures"] = cfg.geometry.n_gestures;
  j["config"]["within_std"] = cfg.geometry.within_std;
  j["config"]["reps_per_gesture"] = cfg.geometry.reps_per_gesture;
  j["config"]["windows_per_rep"] = cfg.geometry.windows_per_rep;
  j["acc_reference"] = result.acc_reference;
  j["within_day_upper_bound"] = result.within_day_upper_bound;
  j["days_evaluated"] = result.reports.size();
  csv::write_file(out_dir / "run_meta.json", j.dump(2) + "\n");
}

}  // namespace emgalign
