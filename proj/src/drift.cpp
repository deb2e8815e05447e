#include "emgalign/drift.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "emgalign/errors.hpp"
#include "emgalign/linalg.hpp"
#include "emgalign/rng.hpp"

namespace emgalign {

namespace {

constexpr int kMaxResample = 100;

/// Gram-Schmidt orthonormalization (two passes) with positive diagonal
/// convention, so an identity input maps to the identity exactly.
Matrix orthonormalize(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix q = m;
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, k) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericalError("orthonormalize: rank-deficient basis");
    // positive diagonal keeps the map continuous in the blend parameter
    const double sign = q(j, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= sign / norm;
  }
  return q;
}

/// Distance from prototype g to the convex hull of the other prototypes,
/// via Frank-Wolfe (deterministic, ample iterations for a threshold check).
double hull_distance(const Matrix& proto, std::size_t g) {
  const std::size_t gestures = proto.rows(), n = proto.cols();
  std::vector<std::size_t> others;
  for (std::size_t h = 0; h < gestures; ++h)
    if (h != g) others.push_back(h);

  std::vector<double> alpha(others.size(), 1.0 / static_cast<double>(others.size()));
  std::vector<double> p(n, 0.0);
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t c = 0; c < n; ++c) {
      p[c] = 0.0;
      for (std::size_t k = 0; k < others.size(); ++k)
        p[c] += alpha[k] * proto(others[k], c);
    }
    std::size_t best = 0;
    double best_grad = 1e300;
    for (std::size_t k = 0; k < others.size(); ++k) {
      double grad = 0.0;
      for (std::size_t c = 0; c < n; ++c)
        grad += proto(others[k], c) * (p[c] - proto(g, c));
      if (grad < best_grad) {
        best_grad = grad;
        best = k;
      }
    }
    const double step = 2.0 / static_cast<double>(it + 2);
    for (double& a : alpha) a *= 1.0 - step;
    alpha[best] += step;
  }
  double d2 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double d = p[c] - proto(g, c);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

/// The one-vs-rest classifier downstream needs every gesture linearly
/// separable from the union of the rest, which pairwise distance alone does
/// not give: a prototype inside the others' convex hull defeats its binary
/// subproblem outright. The generator therefore also demands hull margin.
bool one_vs_rest_separable(const Matrix& proto, double margin) {
  if (proto.rows() < 3) return true;  // hull of one point == pairwise distance
  for (std::size_t g = 0; g < proto.rows(); ++g)
    if (hull_distance(proto, g) < margin) return false;
  return true;
}

}  // namespace

void validate_geometry(const GestureGeometry& geom) {
  if (geom.n_channels < 1 || geom.n_gestures < 1 || geom.reps_per_gesture < 1 ||
      geom.windows_per_rep < 1)
    throw ParameterError("geometry: all counts must be >= 1");
  if (geom.within_std < 0.0) throw ParameterError("geometry: within_std must be >= 0");
  if (geom.prototypes.rows() != geom.n_gestures || geom.prototypes.cols() != geom.n_channels)
    throw DimensionError("geometry: prototypes must be n_gestures x n_channels");
  for (std::size_t a = 0; a < geom.n_gestures; ++a) {
    for (std::size_t b = a + 1; b < geom.n_gestures; ++b) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < geom.n_channels; ++c) {
        const double d = geom.prototypes(a, c) - geom.prototypes(b, c);
        d2 += d * d;
      }
      if (std::sqrt(d2) < 6.0 * geom.within_std)
        throw ParameterError("geometry: prototypes " + std::to_string(a) + " and " +
                             std::to_string(b) + " are closer than 6*within_std");
    }
  }
}

GestureGeometry make_geometry(std::size_t channels, std::size_t gestures, double within_std,
                              std::size_t reps_per_gesture, std::size_t windows_per_rep,
                              std::uint64_t seed) {
  GestureGeometry geom;
  geom.n_channels = channels;
  geom.n_gestures = gestures;
  geom.within_std = within_std;
  geom.reps_per_gesture = reps_per_gesture;
  geom.windows_per_rep = windows_per_rep;

  Rng rng(Rng::derive(seed, 0x67656f6d));  // geometry stream
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    Matrix proto(gestures, channels);
    for (std::size_t g = 0; g < gestures; ++g)
      for (std::size_t c = 0; c < channels; ++c) proto(g, c) = rng.uniform(1.0, 5.0);
    geom.prototypes = std::move(proto);
    if (!one_vs_rest_separable(geom.prototypes, 6.0 * within_std)) continue;
    try {
      validate_geometry(geom);
      return geom;
    } catch (const ParameterError&) {
      // separation violated; resample
    }
  }
  throw NumericalError("make_geometry: could not satisfy the separation invariant after " +
                       std::to_string(kMaxResample) + " attempts; lower within_std");
}

DriftKind drift_kind_from_string(const std::string& name) {
  if (name == "rotation") return DriftKind::Rotation;
  if (name == "general-linear" || name == "general_linear") return DriftKind::GeneralLinear;
  if (name == "gain") return DriftKind::Gain;
  if (name == "offset-only" || name == "offset_only") return DriftKind::OffsetOnly;
  throw ParameterError("unknown drift kind '" + name + "'");
}

std::string to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::Rotation: return "rotation";
    case DriftKind::GeneralLinear: return "general-linear";
    case DriftKind::Gain: return "gain";
    case DriftKind::OffsetOnly: return "offset-only";
  }
  return "unknown";
}

DriftSpec make_drift(DriftKind kind, double magnitude, std::uint64_t seed, std::size_t n) {
  if (magnitude < 0.0) throw ParameterError("make_drift: magnitude must be >= 0");
  Rng rng(Rng::derive(seed, 0x64726966));  // drift stream

  DriftSpec spec;
  spec.offset.assign(n, 0.0);

  switch (kind) {
    case DriftKind::Rotation: {
      // blend identity toward a random matrix, then orthonormalize; proper
      // rotation enforced by flipping the last column when det < 0
      Matrix blend(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          blend(i, j) = (i == j ? 1.0 - magnitude : 0.0) + magnitude * rng.normal();
      Matrix q = orthonormalize(blend);
      if (determinant(q) < 0.0)
        for (std::size_t i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
      spec.mixing = std::move(q);
      break;
    }
    case DriftKind::GeneralLinear: {
      for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxResample)
          throw NumericalError("make_drift: no invertible general-linear draw in " +
                               std::to_string(kMaxResample) + " attempts");
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            m(i, j) = (i == j ? 1.0 : 0.0) + magnitude * rng.normal();
        if (std::abs(determinant(m)) > 1e-3) {
          spec.mixing = std::move(m);
          break;
        }
      }
      break;
    }
    case DriftKind::Gain: {
      for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxResample)
          throw NumericalError("make_drift: no invertible gain draw in " +
                               std::to_string(kMaxResample) + " attempts");
        Matrix m(n, n);
        double det = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          m(i, i) = rng.uniform(1.0 - magnitude, 1.0 + magnitude);
          det *= m(i, i);
        }
        if (std::abs(det) > 1e-6) {
          spec.mixing = std::move(m);
          break;
        }
      }
      break;
    }
    case DriftKind::OffsetOnly: {
      spec.mixing = Matrix::identity(n);
      if (magnitude > 0.0) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          spec.offset[i] = rng.normal();
          norm += spec.offset[i] * spec.offset[i];
        }
        norm = std::sqrt(norm);
        for (double& v : spec.offset) v *= magnitude / norm;
      }
      break;
    }
  }

  if (std::abs(determinant(spec.mixing)) <= 1e-6)
    throw NumericalError("make_drift: mixing determinant below invertibility floor");
  return spec;
}

LabeledWindows gen_reference(const GestureGeometry& geom, std::uint64_t seed) {
  validate_geometry(geom);
  const std::size_t windows =
      geom.n_gestures * geom.reps_per_gesture * geom.windows_per_rep;
  Matrix feats(geom.n_channels, windows);
  std::vector<int> labels(windows), reps(windows);

  Rng rng(Rng::derive(seed, 0x72656631));  // reference stream
  std::size_t w = 0;
  for (std::size_t g = 0; g < geom.n_gestures; ++g) {
    for (std::size_t r = 0; r < geom.reps_per_gesture; ++r) {
      for (std::size_t k = 0; k < geom.windows_per_rep; ++k, ++w) {
        for (std::size_t c = 0; c < geom.n_channels; ++c) {
          const double v = geom.prototypes(g, c) + geom.within_std * rng.normal();
          feats(c, w) = std::max(0.0, v);  // RMS features stay non-negative
        }
        labels[w] = static_cast<int>(g);
        reps[w] = static_cast<int>(r);
      }
    }
  }
  return make_labeled_windows(std::move(feats), std::move(labels), std::move(reps), "day_01");
}

LabeledWindows apply_drift(const LabeledWindows& ref, const DriftSpec& spec,
                           std::uint64_t seed) {
  const std::size_t n = ref.channels();
  if (spec.mixing.rows() != n || spec.mixing.cols() != n || spec.offset.size() != n)
    throw DimensionError("apply_drift: drift dimension " + std::to_string(spec.mixing.rows()) +
                         " != data channels " + std::to_string(n));
  if (spec.noise_std < 0.0) throw ParameterError("apply_drift: noise_std must be >= 0");

  Rng rng(Rng::derive(seed, 0x6e6f6973));  // per-day noise stream
  Matrix out(n, ref.windows());
  for (std::size_t w = 0; w < ref.windows(); ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = spec.offset[i];
      for (std::size_t j = 0; j < n; ++j) acc += spec.mixing(i, j) * ref.features(j, w);
      if (spec.noise_std > 0.0) acc += spec.noise_std * rng.normal();
      out(i, w) = acc;
    }
  }
  LabeledWindows day{std::move(out), ref.labels, ref.repetition,
                     spec.day_id.empty() ? ref.day_id : spec.day_id};
  return day;
}

LabeledWindows invert_drift(const LabeledWindows& drifted, const DriftSpec& spec) {
  const std::size_t n = drifted.channels();
  if (spec.mixing.rows() != n || spec.mixing.cols() != n)
    throw DimensionError("invert_drift: dimension mismatch");
  const Matrix inv = pinv(spec.mixing);
  Matrix out(n, drifted.windows());
  for (std::size_t w = 0; w < drifted.windows(); ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += inv(i, j) * (drifted.features(j, w) - spec.offset[j]);
      out(i, w) = acc;
    }
  }
  return LabeledWindows{std::move(out), drifted.labels, drifted.repetition, drifted.day_id};
}

}  // namespace emgalign
