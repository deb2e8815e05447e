#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emgalign/features.hpp"
#include "emgalign/matrix.hpp"

namespace emgalign {

/// Raw multichannel time series, channels × samples.
struct SignalMatrix {
  Matrix data;  // channels × samples
  double sample_rate_hz = 4000.0;

  std::size_t channels() const { return data.rows(); }
  std::size_t samples() const { return data.cols(); }
};

SignalMatrix make_signal(Matrix data, double sample_rate_hz);

/// FIR filter as a plain tap vector.
struct FirFilter {
  std::vector<double> taps;
  std::string description;
};

/// Magnitude response |H(e^{j 2π f / fs})| evaluated from the taps.
double frequency_response(const FirFilter& f, double freq_hz, double sample_rate_hz);

/// Notch at center_hz: an exact zero pair on the unit circle smoothed by a
/// Hamming kernel to the requested length, normalized to unity DC gain.
/// Requires 0 < center_hz < fs/2 and taps >= 3.
FirFilter design_notch(double center_hz, double sample_rate_hz, std::size_t taps);

/// Linear-phase Hamming-windowed-sinc band-pass, normalized to unity gain at
/// the band midpoint. Requires 0 < low_hz < high_hz < fs/2.
FirFilter design_bandpass(double low_hz, double high_hz, double sample_rate_hz,
                          std::size_t taps);

/// Per-channel causal convolution, zero history, output length == input.
SignalMatrix apply_filter(const FirFilter& f, const SignalMatrix& s);

/// Per-sample annotations for windowing. label -1 marks rest and is excluded;
/// a change of trial id (or a rest gap) ends a segment, so windows never
/// straddle two contractions.
struct SampleAnnotations {
  std::vector<int> label;
  std::vector<int> repetition;
  std::vector<int> trial;
};

/// Sliding-window RMS feature extraction. Window/slide lengths in ms are
/// converted with W = round(window_ms·fs/1000), S = round(slide_ms·fs/1000);
/// each segment yields floor((len−W)/S)+1 windows. Window label is the
/// majority label (ties toward the earliest sample's label).
LabeledWindows rms_features(const SignalMatrix& s, double window_ms, double slide_ms,
                            const SampleAnnotations& ann, std::string day_id);

/// Window count formula for one segment of `samples` samples (0 if samples < width).
std::size_t window_count(std::size_t samples, std::size_t width, std::size_t stride);

}  // namespace emgalign
