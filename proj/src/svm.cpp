#include "emgalign/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/kernels.hpp"
#include "emgalign/rng.hpp"

namespace emgalign {

namespace {

Matrix standardize(const Matrix& features, const std::vector<double>& means,
                   const std::vector<double>& scales) {
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      out(r, c) = (features(r, c) - means[r]) / scales[r];
  return out;
}

}  // namespace

SvmModel svm_train(const LabeledWindows& train, const SvmTrainOptions& opts) {
  if (opts.reg_c <= 0.0) throw ParameterError("svm_train: reg_c must be > 0");
  if (opts.epochs < 1) throw ParameterError("svm_train: need at least one epoch");
  for (double v : train.features.entries())
    if (!std::isfinite(v)) throw DataError("svm_train: non-finite feature value");

  const std::set<int> class_set(train.labels.begin(), train.labels.end());
  if (class_set.size() < 2)
    throw TrainingError("svm_train: need at least two classes, got " +
                        std::to_string(class_set.size()));

  const std::size_t n = train.channels();
  const std::size_t samples = train.windows();
  const std::size_t g = class_set.size();

  SvmModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.reg_c = opts.reg_c;
  model.seed = opts.seed;
  model.feature_means.assign(n, 0.0);
  model.feature_scales.assign(n, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < samples; ++c) mean += train.features(r, c);
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (std::size_t c = 0; c < samples; ++c) {
      const double d = train.features(r, c) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(samples));
    model.feature_means[r] = mean;
    model.feature_scales[r] = sd > 1e-12 ? sd : 1.0;
  }

  const Matrix x = standardize(train.features, model.feature_means, model.feature_scales);
  const double lambda = 1.0 / (opts.reg_c * static_cast<double>(samples));

  model.weights = Matrix(g, n);
  model.biases.assign(g, 0.0);

  // Pegasos-style epoch-wise subgradient descent, one binary problem per
  // class. The bias rides along as a regularized constant feature (w[n]);
  // left out of the shrink step it takes 1/(lambda*t)-sized kicks that swamp
  // the data term and never settle. Each class gets its own derived seed so
  // the shuffled orders are decorrelated but fully reproducible.
  for (std::size_t cls = 0; cls < g; ++cls) {
    const int target = model.classes[cls];
    std::vector<double> w(n + 1, 0.0);  // w[n] multiplies the constant 1
    Rng rng(Rng::derive(opts.seed, cls));
    std::vector<std::size_t> order(samples);
    std::iota(order.begin(), order.end(), 0);

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
      rng.shuffle(order);
      for (const std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double y = train.labels[i] == target ? 1.0 : -1.0;
        double score = w[n];
        for (std::size_t r = 0; r < n; ++r) score += w[r] * x(r, i);
        const double shrink = 1.0 - eta * lambda;
        for (double& wr : w) wr *= shrink;
        if (y * score < 1.0) {
          for (std::size_t r = 0; r < n; ++r) w[r] += eta * y * x(r, i);
          w[n] += eta * y;
        }
      }
    }
    for (std::size_t r = 0; r < n; ++r) model.weights(cls, r) = w[r];
    model.biases[cls] = w[n];
  }
  return model;
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& features) {
  const std::size_t n = model.weights.cols();
  if (features.rows() != n)
    throw DimensionError("svm_predict: feature rows " + std::to_string(features.rows()) +
                         " != model dimension " + std::to_string(n));
  const Matrix x = standardize(features, model.feature_means, model.feature_scales);
  const auto arg = kernels::score_argmax(model.weights, model.biases, x,
                                         kernels::default_exec());
  std::vector<int> labels(arg.size());
  for (std::size_t i = 0; i < arg.size(); ++i) labels[i] = model.classes[arg[i]];
  return labels;
}

std::vector<int> svm_predict(const SvmModel& model, const LabeledWindows& day) {
  return svm_predict(model, day.features);
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw DimensionError("accuracy: lengths differ (" + std::to_string(predicted.size()) +
                         " vs " + std::to_string(truth.size()) + ")");
  if (predicted.empty()) throw DimensionError("accuracy: empty inputs");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double svm_objective(const SvmModel& model, const LabeledWindows& data) {
  const Matrix x = standardize(data.features, model.feature_means, model.feature_scales);
  double total = 0.0;
  for (std::size_t cls = 0; cls < model.classes.size(); ++cls) {
    double norm2 = 0.0;
    for (std::size_t r = 0; r < model.weights.cols(); ++r)
      norm2 += model.weights(cls, r) * model.weights(cls, r);
    double hinge = 0.0;
    for (std::size_t i = 0; i < data.windows(); ++i) {
      const double y = data.labels[i] == model.classes[cls] ? 1.0 : -1.0;
      double score = model.biases[cls];
      for (std::size_t r = 0; r < model.weights.cols(); ++r)
        score += model.weights(cls, r) * x(r, i);
      hinge += std::max(0.0, 1.0 - y * score);
    }
    total += 0.5 * norm2 + model.reg_c * hinge;
  }
  return total;
}

void save_model_csv(const SvmModel& model, const std::filesystem::path& path) {
  const std::size_t g = model.classes.size(), n = model.weights.cols();
  std::string text;
  text += "G," + std::to_string(g) + "\n";
  text += "n," + std::to_string(n) + "\n";
  text += "reg_c," + csv::format(model.reg_c) + "\n";
  text += "seed," + std::to_string(model.seed) + "\n";
  text += "classes";
  for (int c : model.classes) text += "," + std::to_string(c);
  text += "\n";
  auto emit_vector = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) text += ',';
      text += csv::format(v[i]);
    }
    text += '\n';
  };
  emit_vector(model.feature_means);
  emit_vector(model.feature_scales);
  for (std::size_t cls = 0; cls < g; ++cls) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r) text += ',';
      text += csv::format(model.weights(cls, r));
    }
    text += ',' + csv::format(model.biases[cls]) + '\n';
  }
  csv::write_file(path, text);
}

SvmModel load_model_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  const std::string ctx = path.string();
  auto header = [&](std::size_t i, const std::string& key) -> std::vector<std::string> {
    if (i >= lines.size()) throw IngestError(ctx + ": truncated model file");
    auto f = csv::split(lines[i]);
    if (f.size() < 2 || f[0] != key)
      throw IngestError(ctx + ": expected '" + key + ",...' on line " + std::to_string(i + 1));
    f.erase(f.begin());
    return f;
  };
  const auto g = static_cast<std::size_t>(csv::parse_long(header(0, "G")[0], ctx));
  const auto n = static_cast<std::size_t>(csv::parse_long(header(1, "n")[0], ctx));
  const double reg_c = csv::parse_double(header(2, "reg_c")[0], ctx);
  const auto seed = static_cast<std::uint64_t>(csv::parse_long(header(3, "seed")[0], ctx));
  const auto class_fields = header(4, "classes");
  if (class_fields.size() != g) throw IngestError(ctx + ": class list length != G");

  SvmModel model;
  model.reg_c = reg_c;
  model.seed = seed;
  for (const auto& f : class_fields)
    model.classes.push_back(static_cast<int>(csv::parse_long(f, ctx)));

  std::size_t line = 5;
  auto read_row = [&](std::size_t expect) {
    if (line >= lines.size()) throw IngestError(ctx + ": truncated model file");
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

  model.feature_means = read_row(n);
  model.feature_scales = read_row(n);
  model.weights = Matrix(g, n);
  model.biases.assign(g, 0.0);
  for (std::size_t cls = 0; cls < g; ++cls) {
    const auto row = read_row(n + 1);
    for (std::size_t r = 0; r < n; ++r) model.weights(cls, r) = row[r];
    model.biases[cls] = row[n];
  }
  return model;
}

}  // namespace emgalign
