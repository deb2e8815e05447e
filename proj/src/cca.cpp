#include "emgalign/cca.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/kernels.hpp"
#include "emgalign/linalg.hpp"

namespace emgalign {

namespace {

std::vector<double> row_means(const Matrix& m) {
  std::vector<double> mu(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c);
    mu[r] = acc / static_cast<double>(m.cols());
  }
  return mu;
}

Matrix center_columns(const Matrix& m, const std::vector<double>& mu) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c) - mu[r];
  return out;
}

double mean_trace_over_n(const Matrix& c) {
  double tr = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i) tr += c(i, i);
  return tr / static_cast<double>(c.rows());
}

}  // namespace

CcaMapping cca_fit(const Matrix& ref_calib, const Matrix& new_calib, const CcaOptions& opts) {
  if (ref_calib.empty() || new_calib.empty()) throw ParameterError("cca_fit: empty input");
  if (ref_calib.rows() != new_calib.rows())
    throw DimensionError("cca_fit: channel counts differ (" +
                         std::to_string(ref_calib.rows()) + " vs " +
                         std::to_string(new_calib.rows()) + ")");
  if (ref_calib.cols() != new_calib.cols())
    throw PairingError("cca_fit: inputs must pair column-for-column (" +
                       std::to_string(ref_calib.cols()) + " vs " +
                       std::to_string(new_calib.cols()) + " columns)");
  const std::size_t n = ref_calib.rows();
  if (ref_calib.cols() <= n)
    throw ParameterError("cca_fit: need more paired samples than channels (" +
                         std::to_string(ref_calib.cols()) + " <= " + std::to_string(n) + ")");
  if (opts.ridge < 0.0) throw ParameterError("cca_fit: ridge must be >= 0");

  std::vector<double> mean_ref(n, 0.0), mean_new(n, 0.0);
  if (opts.center) {
    mean_ref = row_means(ref_calib);
    mean_new = row_means(new_calib);
  }
  const Matrix xc = center_columns(ref_calib, mean_ref);
  const Matrix yc = center_columns(new_calib, mean_new);

  const Matrix cxx = covariance(xc, xc);
  const Matrix cyy = covariance(yc, yc);
  const Matrix cxy = covariance(xc, yc);

  // Relative ridge keeps the regularization proportionate to signal power.
  const Matrix sx = inv_sqrt_sym(cxx, opts.ridge * mean_trace_over_n(cxx));
  const Matrix sy = inv_sqrt_sym(cyy, opts.ridge * mean_trace_over_n(cyy));

  const Matrix omega = multiply(multiply(sx, cxy), sy);
  const SvdResult dec = svd(omega);

  CcaMapping map;
  map.a = multiply(sx, dec.u);
  map.b = multiply(sy, transpose(dec.vt));
  map.correlations.resize(dec.sigma.size());
  for (std::size_t i = 0; i < dec.sigma.size(); ++i)
    map.correlations[i] = std::clamp(dec.sigma[i], 0.0, 1.0);
  map.mean_ref = mean_ref;
  map.mean_new = mean_new;
  map.ridge = opts.ridge;
  return map;
}

Matrix cca_project(const CcaMapping& map, const Matrix& new_day) {
  if (new_day.rows() != map.channels())
    throw DimensionError("cca_project: data has " + std::to_string(new_day.rows()) +
                         " rows, mapping expects " + std::to_string(map.channels()));
  const Matrix back = multiply(pinv(transpose(map.a)), transpose(map.b));
  return kernels::project_affine(back, new_day, map.mean_new, map.mean_ref,
                                 kernels::default_exec());
}

LabeledWindows cca_project(const CcaMapping& map, const LabeledWindows& new_day) {
  LabeledWindows out = new_day;
  out.features = cca_project(map, new_day.features);
  return out;
}

CalibrationPair calibration_subset(const LabeledWindows& ref_day,
                                   const LabeledWindows& new_day,
                                   std::size_t reps_per_gesture) {
  if (reps_per_gesture < 1) throw ParameterError("calibration_subset: need >= 1 repetition");
  if (ref_day.channels() != new_day.channels())
    throw DimensionError("calibration_subset: channel counts differ");

  // every gesture seen on either day must carry enough repetitions on both
  std::set<int> universe(ref_day.labels.begin(), ref_day.labels.end());
  universe.insert(new_day.labels.begin(), new_day.labels.end());
  const std::vector<int> gestures(universe.begin(), universe.end());

  std::string missing;
  std::map<int, std::vector<int>> ref_sel, new_sel;
  for (const int g : gestures) {
    const auto rr = repetitions_of(ref_day, g);
    const auto nr = repetitions_of(new_day, g);
    if (rr.size() < reps_per_gesture || nr.size() < reps_per_gesture) {
      if (!missing.empty()) missing += ", ";
      missing += std::to_string(g);
      continue;
    }
    ref_sel[g].assign(rr.begin(), rr.begin() + static_cast<long>(reps_per_gesture));
    new_sel[g].assign(nr.begin(), nr.begin() + static_cast<long>(reps_per_gesture));
  }
  if (!missing.empty())
    throw CoverageError("calibration_subset: gestures missing or with fewer than " +
                        std::to_string(reps_per_gesture) + " repetitions: " + missing);

  auto block_windows = [](const LabeledWindows& day, int gesture, int rep) {
    std::vector<std::size_t> idx;
    for (std::size_t w = 0; w < day.windows(); ++w)
      if (day.labels[w] == gesture && day.repetition[w] == rep) idx.push_back(w);
    return idx;
  };

  CalibrationPair pair;
  for (const int g : gestures) {
    for (std::size_t k = 0; k < reps_per_gesture; ++k) {
      const auto ref_block = block_windows(ref_day, g, ref_sel[g][k]);
      const auto new_block = block_windows(new_day, g, new_sel[g][k]);
      const std::size_t take = std::min(ref_block.size(), new_block.size());
      for (std::size_t i = 0; i < take; ++i) {
        pair.ref_indices.push_back(ref_block[i]);
        pair.new_indices.push_back(new_block[i]);
      }
      pair.ref_reps.push_back(ref_sel[g][k]);
      pair.new_reps.push_back(new_sel[g][k]);
    }
  }
  if (pair.ref_indices.empty())
    throw CoverageError("calibration_subset: selection is empty");

  const std::size_t n = ref_day.channels(), t = pair.ref_indices.size();
  pair.ref = Matrix(n, t);
  pair.novel = Matrix(n, t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      pair.ref(c, i) = ref_day.features(c, pair.ref_indices[i]);
      pair.novel(c, i) = new_day.features(c, pair.new_indices[i]);
    }
  }
  return pair;
}

void save_mapping_csv(const CcaMapping& map, const std::filesystem::path& path) {
  const std::size_t n = map.channels(), m = map.components();
  std::string text;
  text += "n," + std::to_string(n) + "\n";
  text += "m," + std::to_string(m) + "\n";
  text += "ridge," + csv::format(map.ridge) + "\n";
  auto emit_matrix = [&](const Matrix& mat) {
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      for (std::size_t c = 0; c < mat.cols(); ++c) {
        if (c) text += ',';
        text += csv::format(mat(r, c));
      }
      text += '\n';
    }
  };
  auto emit_vector = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) text += ',';
      text += csv::format(v[i]);
    }
    text += '\n';
  };
  emit_matrix(map.a);
  emit_matrix(map.b);
  emit_vector(map.correlations);
  emit_vector(map.mean_ref);
  emit_vector(map.mean_new);
  csv::write_file(path, text);
}

CcaMapping load_mapping_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  const std::string ctx = path.string();
  auto header = [&](std::size_t i, const std::string& key) -> std::string {
    if (i >= lines.size()) throw IngestError(ctx + ": truncated mapping file");
    const auto f = csv::split(lines[i]);
    if (f.size() != 2 || f[0] != key)
      throw IngestError(ctx + ": expected '" + key + ",<value>' on line " +
                        std::to_string(i + 1));
    return f[1];
  };
  const auto n = static_cast<std::size_t>(csv::parse_long(header(0, "n"), ctx));
  const auto m = static_cast<std::size_t>(csv::parse_long(header(1, "m"), ctx));
  const double ridge = csv::parse_double(header(2, "ridge"), ctx);

  std::size_t line = 3;
  auto read_row = [&](std::size_t expect) {
    if (line >= lines.size()) throw IngestError(ctx + ": truncated mapping file");
    const auto f = csv::split(lines[line]);
    if (f.size() != expect)
      throw IngestError(ctx + ": line " + std::to_string(line + 1) + " has " +
                        std::to_string(f.size()) + " fields, expected " +
                        std::to_string(expect));
    std::vector<double> row(expect);
    for (std::size_t i = 0; i < expect; ++i)
      row[i] = csv::parse_double(f[i], ctx + " line " + std::to_string(line + 1));
    ++line;
    return row;
  };
  auto read_matrix = [&](std::size_t rows, std::size_t cols) {
    Matrix mat(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = read_row(cols);
      for (std::size_t c = 0; c < cols; ++c) mat(r, c) = row[c];
    }
    return mat;
  };

  CcaMapping map;
  map.a = read_matrix(n, m);
  map.b = read_matrix(n, m);
  map.correlations = read_row(m);
  map.mean_ref = read_row(n);
  map.mean_new = read_row(n);
  map.ridge = ridge;
  return map;
}

}  // namespace emgalign
