#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "emgalign/features.hpp"
#include "emgalign/matrix.hpp"

namespace emgalign {

/// One-vs-rest linear soft-margin SVM. Feature standardization lives inside
/// the model so CCA-projected data passes through the identical transform.
struct SvmModel {
  Matrix weights;                     // G × n
  std::vector<double> biases;         // G
  std::vector<int> classes;           // gesture ids, ascending
  std::vector<double> feature_means;  // n
  std::vector<double> feature_scales; // n, all > 0
  double reg_c = 1.0;
  std::uint64_t seed = 0;
};

struct SvmTrainOptions {
  double reg_c = 1.0;
  std::size_t epochs = 200;
  std::uint64_t seed = 42;
};

/// Deterministic epoch-wise subgradient training (Pegasos-style): per class
/// minimize (1/2)‖w‖² + C·Σ hinge with step 1/(λt), λ = 1/(C·N), sample order
/// shuffled by the seeded generator. Bit-identical given (data, seed).
SvmModel svm_train(const LabeledWindows& train, const SvmTrainOptions& opts = {});

/// argmax_g w_gᵀx̂ + b_g per window; ties break toward the smallest gesture id.
std::vector<int> svm_predict(const SvmModel& model, const Matrix& features);
std::vector<int> svm_predict(const SvmModel& model, const LabeledWindows& day);

/// Fraction of exact matches; lengths must agree and be >= 1.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Primal objective Σ_g [(1/2)‖w_g‖² + C·Σ_i hinge_i] on the model's own
/// standardization, for convergence checks.
double svm_objective(const SvmModel& model, const LabeledWindows& data);

/// CSV model file, bit-exact round-trip.
void save_model_csv(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model_csv(const std::filesystem::path& path);

}  // namespace emgalign
