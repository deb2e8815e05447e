#include "emgalign/signal.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "emgalign/errors.hpp"
#include "emgalign/kernels.hpp"

namespace emgalign {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> hamming(std::size_t length) {
  std::vector<double> w(length);
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < length; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                  static_cast<double>(length - 1));
  return w;
}
}  // namespace

SignalMatrix make_signal(Matrix data, double sample_rate_hz) {
  if (sample_rate_hz <= 0.0) throw ParameterError("sample_rate_hz must be > 0");
  return SignalMatrix{std::move(data), sample_rate_hz};
}

double frequency_response(const FirFilter& f, double freq_hz, double sample_rate_hz) {
  const double omega = 2.0 * kPi * freq_hz / sample_rate_hz;
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < f.taps.size(); ++k) {
    re += f.taps[k] * std::cos(omega * static_cast<double>(k));
    im -= f.taps[k] * std::sin(omega * static_cast<double>(k));
  }
  return std::hypot(re, im);
}

FirFilter design_notch(double center_hz, double sample_rate_hz, std::size_t taps) {
  if (sample_rate_hz <= 0.0) throw ParameterError("design_notch: sample rate must be > 0");
  if (center_hz <= 0.0 || center_hz >= sample_rate_hz / 2.0)
    throw ParameterError("design_notch: center " + std::to_string(center_hz) +
                         " Hz outside (0, fs/2)");
  if (taps < 3) throw ParameterError("design_notch: need at least 3 taps");

  // Conjugate zero pair exactly on the unit circle at the notch frequency,
  // lengthened by a unit-sum Hamming smoothing kernel, then DC-normalized.
  const double w0 = 2.0 * kPi * center_hz / sample_rate_hz;
  const std::vector<double> base{1.0, -2.0 * std::cos(w0), 1.0};
  std::vector<double> smooth = hamming(taps - 2);
  double sum = 0.0;
  for (double v : smooth) sum += v;
  for (double& v : smooth) v /= sum;

  std::vector<double> h(taps, 0.0);
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < smooth.size(); ++j) h[i + j] += base[i] * smooth[j];

  double dc = 0.0;
  for (double v : h) dc += v;
  for (double& v : h) v /= dc;

  return FirFilter{std::move(h), "notch " + std::to_string(center_hz) + " Hz, " +
                                     std::to_string(taps) + " taps"};
}

FirFilter design_bandpass(double low_hz, double high_hz, double sample_rate_hz,
                          std::size_t taps) {
  if (sample_rate_hz <= 0.0) throw ParameterError("design_bandpass: sample rate must be > 0");
  if (!(0.0 < low_hz && low_hz < high_hz && high_hz < sample_rate_hz / 2.0))
    throw ParameterError("design_bandpass: band [" + std::to_string(low_hz) + ", " +
                         std::to_string(high_hz) + "] Hz invalid for fs " +
                         std::to_string(sample_rate_hz));
  if (taps < 3) throw ParameterError("design_bandpass: need at least 3 taps");

  // Linear-phase windowed sinc: lowpass(high) - lowpass(low), Hamming window.
  const double mid = static_cast<double>(taps - 1) / 2.0;
  const auto window = hamming(taps);
  std::vector<double> h(taps);
  for (std::size_t i = 0; i < taps; ++i) {
    const double x = static_cast<double>(i) - mid;
    double ideal;
    if (x == 0.0) {
      ideal = 2.0 * (high_hz - low_hz) / sample_rate_hz;
    } else {
      ideal = (std::sin(2.0 * kPi * high_hz / sample_rate_hz * x) -
               std::sin(2.0 * kPi * low_hz / sample_rate_hz * x)) /
              (kPi * x);
    }
    h[i] = ideal * window[i];
  }

  FirFilter f{std::move(h), "band-pass " + std::to_string(low_hz) + "-" +
                                std::to_string(high_hz) + " Hz, " + std::to_string(taps) +
                                " taps"};
  const double mid_gain = frequency_response(f, 0.5 * (low_hz + high_hz), sample_rate_hz);
  if (mid_gain < 1e-12)
    throw NumericalError("design_bandpass: degenerate mid-band response");
  for (double& v : f.taps) v /= mid_gain;
  return f;
}

SignalMatrix apply_filter(const FirFilter& f, const SignalMatrix& s) {
  if (f.taps.empty()) throw ParameterError("apply_filter: empty filter");
  return SignalMatrix{kernels::convolve_fir(f.taps, s.data, kernels::default_exec()),
                      s.sample_rate_hz};
}

std::size_t window_count(std::size_t samples, std::size_t width, std::size_t stride) {
  if (width == 0 || stride == 0) throw ParameterError("window_count: zero width or stride");
  if (samples < width) return 0;
  return (samples - width) / stride + 1;
}

LabeledWindows rms_features(const SignalMatrix& s, double window_ms, double slide_ms,
                            const SampleAnnotations& ann, std::string day_id) {
  if (window_ms <= 0.0 || slide_ms <= 0.0)
    throw ParameterError("rms_features: window and slide must be > 0 ms");
  const std::size_t samples = s.samples();
  if (ann.label.size() != samples || ann.repetition.size() != samples ||
      ann.trial.size() != samples)
    throw DimensionError("rms_features: annotation length != sample count");

  const auto w = static_cast<std::size_t>(std::lround(window_ms * s.sample_rate_hz / 1000.0));
  const auto stride =
      static_cast<std::size_t>(std::lround(slide_ms * s.sample_rate_hz / 1000.0));
  if (w == 0 || stride == 0)
    throw ParameterError("rms_features: window or slide rounds to zero samples");
  if (w > samples)
    throw ParameterError("rms_features: signal (" + std::to_string(samples) +
                         " samples) shorter than one window (" + std::to_string(w) + ")");

  // Segment into maximal runs of constant trial id with an active (>= 0)
  // label; windows never straddle a segment boundary.
  struct Segment {
    std::size_t begin, end;  // [begin, end)
  };
  std::vector<Segment> segments;
  std::size_t pos = 0;
  while (pos < samples) {
    if (ann.label[pos] < 0) {
      ++pos;
      continue;
    }
    std::size_t end = pos + 1;
    while (end < samples && ann.label[end] >= 0 && ann.trial[end] == ann.trial[pos]) ++end;
    segments.push_back({pos, end});
    pos = end;
  }

  std::vector<std::size_t> starts;
  for (const auto& seg : segments) {
    const std::size_t count = window_count(seg.end - seg.begin, w, stride);
    for (std::size_t k = 0; k < count; ++k) starts.push_back(seg.begin + k * stride);
  }
  if (starts.empty())
    throw ParameterError("rms_features: no trial segment is long enough for one window");

  Matrix feats = kernels::rms_windows(s.data, starts, w, kernels::default_exec());

  std::vector<int> labels(starts.size()), reps(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    // majority label; ties toward the label seen earliest in the window
    std::map<int, std::size_t> count;
    std::map<int, std::size_t> first_seen;
    for (std::size_t t = starts[k]; t < starts[k] + w; ++t) {
      const int lab = ann.label[t];
      ++count[lab];
      if (!first_seen.contains(lab)) first_seen[lab] = t;
    }
    int best = ann.label[starts[k]];
    for (const auto& [lab, c] : count) {
      if (c > count[best] || (c == count[best] && first_seen[lab] < first_seen[best]))
        best = lab;
    }
    labels[k] = best;
    reps[k] = ann.repetition[starts[k]];
  }

  return make_labeled_windows(std::move(feats), std::move(labels), std::move(reps),
                              std::move(day_id));
}

}  // namespace emgalign
