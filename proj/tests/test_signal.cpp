#include <doctest.h>

#include <cmath>
#include <vector>

#include "emgalign/errors.hpp"
#include "emgalign/rng.hpp"
#include "emgalign/signal.hpp"
#include "oracles.hpp"

using namespace emgalign;

namespace {

SignalMatrix sine_signal(double freq_hz, double fs, std::size_t samples, double amp = 1.0) {
  Matrix m(1, samples);
  for (std::size_t t = 0; t < samples; ++t)
    m(0, t) = amp * std::sin(2.0 * 3.14159265358979323846 * freq_hz *
                             static_cast<double>(t) / fs);
  return make_signal(std::move(m), fs);
}

SampleAnnotations flat_annotations(std::size_t samples, int label = 0, int rep = 0,
                                   int trial = 0) {
  return SampleAnnotations{std::vector<int>(samples, label), std::vector<int>(samples, rep),
                           std::vector<int>(samples, trial)};
}

}  // namespace

TEST_CASE("notch response: deep null at center, unity DC") {
  const FirFilter f = design_notch(50.0, 4000.0, 10);
  REQUIRE(f.taps.size() == 10);
  const double at_center = oracles::magnitude_response(f.taps, 50.0, 4000.0);
  const double at_dc = oracles::magnitude_response(f.taps, 0.0, 4000.0);
  CHECK(20.0 * std::log10(at_center / at_dc + 1e-300) <= -20.0);
  CHECK(std::abs(20.0 * std::log10(at_dc)) <= 3.0);
}

TEST_CASE("notch rejects frequencies outside (0, fs/2)") {
  CHECK_THROWS_AS(design_notch(2500.0, 4000.0, 10), ParameterError);
  CHECK_THROWS_AS(design_notch(0.0, 4000.0, 10), ParameterError);
  CHECK_THROWS_AS(design_notch(50.0, 4000.0, 2), ParameterError);
}

TEST_CASE("band-pass response contracts") {
  const FirFilter f = design_bandpass(2.0, 1000.0, 4000.0, 15);
  REQUIRE(f.taps.size() == 15);
  const double mid = oracles::magnitude_response(f.taps, 501.0, 4000.0);
  CHECK(std::abs(20.0 * std::log10(mid)) <= 3.0);
  const double stop = oracles::magnitude_response(f.taps, 1800.0, 4000.0);
  CHECK(20.0 * std::log10(stop) <= -10.0);
  CHECK_THROWS_AS(design_bandpass(1000.0, 2.0, 4000.0, 15), ParameterError);
  CHECK_THROWS_AS(design_bandpass(2.0, 2200.0, 4000.0, 15), ParameterError);
}

TEST_CASE("apply_filter: identity and moving average") {
  Rng rng(3);
  Matrix data(2, 100);
  for (std::size_t i = 0; i < 200; ++i) data.data()[i] = rng.normal();
  const SignalMatrix s = make_signal(data, 4000.0);

  const SignalMatrix same = apply_filter(FirFilter{{1.0}, "identity"}, s);
  CHECK(same.data == s.data);

  Matrix constant(1, 50);
  for (std::size_t t = 0; t < 50; ++t) constant(0, t) = 7.5;
  const SignalMatrix c = apply_filter(FirFilter{{0.5, 0.5}, "avg"},
                                      make_signal(constant, 4000.0));
  CHECK(c.data(0, 0) == doctest::Approx(3.75));  // one-sample transient
  for (std::size_t t = 1; t < 50; ++t) CHECK(c.data(0, t) == doctest::Approx(7.5));
}

TEST_CASE("filtered sine amplitude matches the frequency response") {
  const double fs = 4000.0;
  const FirFilter notch = design_notch(50.0, fs, 10);

  // at the notch center the output must vanish
  const SignalMatrix at50 = apply_filter(notch, sine_signal(50.0, fs, 4000));
  std::vector<double> y(at50.samples());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = at50.data(0, t);
  CHECK(oracles::sine_amplitude(y, 50.0, fs, 100) < 1e-9);

  // at a partially attenuated frequency the fit matches |H| within 5%
  const double probe = 150.0;
  const double gain = oracles::magnitude_response(notch.taps, probe, fs);
  REQUIRE(gain > 0.05);  // meaningful comparison point
  const SignalMatrix filt = apply_filter(notch, sine_signal(probe, fs, 4000));
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = filt.data(0, t);
  const double fitted = oracles::sine_amplitude(y, probe, fs, 100);
  CHECK(fitted == doctest::Approx(gain).epsilon(0.05));
}

TEST_CASE("apply_filter is linear") {
  Rng rng(5);
  Matrix xa(1, 256), xb(1, 256);
  for (std::size_t t = 0; t < 256; ++t) {
    xa(0, t) = rng.normal();
    xb(0, t) = rng.normal();
  }
  const FirFilter f = design_bandpass(2.0, 1000.0, 4000.0, 15);
  const double a = 2.25, b = -0.75;
  Matrix combo(1, 256);
  for (std::size_t t = 0; t < 256; ++t) combo(0, t) = a * xa(0, t) + b * xb(0, t);

  const Matrix fa = apply_filter(f, make_signal(xa, 4000.0)).data;
  const Matrix fb = apply_filter(f, make_signal(xb, 4000.0)).data;
  const Matrix fc = apply_filter(f, make_signal(combo, 4000.0)).data;
  for (std::size_t t = 0; t < 256; ++t)
    CHECK(fc(0, t) == doctest::Approx(a * fa(0, t) + b * fb(0, t)).epsilon(1e-10));
}

TEST_CASE("channel independence of filtering and windowing") {
  Rng rng(6);
  Matrix data(4, 600);
  for (std::size_t i = 0; i < 4 * 600; ++i) data.data()[i] = rng.normal();
  const FirFilter f = design_notch(50.0, 4000.0, 10);
  const SignalMatrix full = apply_filter(f, make_signal(data, 4000.0));

  Matrix ch2(1, 600);
  for (std::size_t t = 0; t < 600; ++t) ch2(0, t) = data(2, t);
  const SignalMatrix solo = apply_filter(f, make_signal(ch2, 4000.0));
  for (std::size_t t = 0; t < 600; ++t) CHECK(solo.data(0, t) == full.data(2, t));

  const auto ann_full = flat_annotations(600);
  const LabeledWindows wf = rms_features(full, 50.0, 25.0, ann_full, "d");
  const LabeledWindows ws = rms_features(solo, 50.0, 25.0, ann_full, "d");
  for (std::size_t w = 0; w < wf.windows(); ++w) CHECK(ws.features(0, w) == wf.features(2, w));
}

TEST_CASE("rms of constant and alternating signals") {
  Matrix constant(1, 1200);
  for (std::size_t t = 0; t < 1200; ++t) constant(0, t) = 3.0;
  const LabeledWindows w = rms_features(make_signal(constant, 4000.0), 300.0, 100.0,
                                        flat_annotations(1200), "d");
  for (std::size_t k = 0; k < w.windows(); ++k)
    CHECK(w.features(0, k) == doctest::Approx(3.0).epsilon(1e-15));

  Matrix alt(1, 1200);
  for (std::size_t t = 0; t < 1200; ++t) alt(0, t) = (t % 2 == 0) ? 1.0 : -1.0;
  const LabeledWindows wa = rms_features(make_signal(alt, 4000.0), 300.0, 100.0,
                                         flat_annotations(1200), "d");
  for (std::size_t k = 0; k < wa.windows(); ++k)
    CHECK(wa.features(0, k) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("3 s trial at 4 kHz yields 28 windows of 300/100 ms") {
  Matrix sig(1, 12000);
  for (std::size_t t = 0; t < 12000; ++t) sig(0, t) = 1.0;
  const LabeledWindows w = rms_features(make_signal(sig, 4000.0), 300.0, 100.0,
                                        flat_annotations(12000), "d");
  CHECK(w.windows() == 28);
  CHECK(oracles::enumerate_windows(12000, 1200, 400) == 28);
}

TEST_CASE("window count formula matches enumeration on random triples") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t t = 50 + rng.below(20000);
    const std::size_t w = 1 + rng.below(t);
    const std::size_t s = 1 + rng.below(2000);
    CHECK(window_count(t, w, s) == oracles::enumerate_windows(t, w, s));
  }
}

TEST_CASE("rms homogeneity under scaling") {
  Rng rng(19);
  Matrix sig(3, 2400);
  for (std::size_t i = 0; i < 3 * 2400; ++i) sig.data()[i] = rng.normal();
  const double c = -3.7;
  Matrix scaled(3, 2400);
  for (std::size_t i = 0; i < 3 * 2400; ++i) scaled.data()[i] = c * sig.data()[i];

  const auto ann = flat_annotations(2400);
  const LabeledWindows base = rms_features(make_signal(sig, 4000.0), 300.0, 100.0, ann, "d");
  const LabeledWindows scl =
      rms_features(make_signal(scaled, 4000.0), 300.0, 100.0, ann, "d");
  for (std::size_t i = 0; i < base.features.entries().size(); ++i) {
    const double expect = std::abs(c) * base.features.entries()[i];
    CHECK(scl.features.entries()[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("windows never straddle trial boundaries; rest is excluded") {
  // two trials of 1600 samples with a rest gap; W=1200 S=400
  const std::size_t n = 1600 + 800 + 1600;
  Matrix sig(1, n);
  SampleAnnotations ann;
  ann.label.resize(n);
  ann.repetition.resize(n);
  ann.trial.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (t < 1600) {
      sig(0, t) = 1.0;
      ann.label[t] = 0;
      ann.repetition[t] = 0;
      ann.trial[t] = 0;
    } else if (t < 2400) {
      sig(0, t) = 100.0;  // rest segment; huge value would poison any window
      ann.label[t] = -1;
      ann.repetition[t] = 0;
      ann.trial[t] = 1;
    } else {
      sig(0, t) = 2.0;
      ann.label[t] = 1;
      ann.repetition[t] = 3;
      ann.trial[t] = 2;
    }
  }
  const LabeledWindows w =
      rms_features(make_signal(sig, 4000.0), 300.0, 100.0, ann, "d");
  // each 1600-sample trial yields floor((1600-1200)/400)+1 = 2 windows
  REQUIRE(w.windows() == 4);
  CHECK(w.features(0, 0) == doctest::Approx(1.0));
  CHECK(w.features(0, 1) == doctest::Approx(1.0));
  CHECK(w.features(0, 2) == doctest::Approx(2.0));
  CHECK(w.features(0, 3) == doctest::Approx(2.0));
  CHECK(w.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(w.repetition == std::vector<int>{0, 0, 3, 3});
}

TEST_CASE("majority window label with earlier-sample tie-break") {
  Matrix sig(1, 10);
  for (std::size_t t = 0; t < 10; ++t) sig(0, t) = 1.0;
  SampleAnnotations ann;
  ann.label = {1, 1, 1, 1, 2, 2, 2, 2, 2, 2};  // one trial, mixed labels
  ann.repetition.assign(10, 0);
  ann.trial.assign(10, 0);
  // fs=1000 Hz, window 8 ms = 8 samples, slide 2 ms
  const LabeledWindows w = rms_features(make_signal(sig, 1000.0), 8.0, 2.0, ann, "d");
  REQUIRE(w.windows() == 2);
  CHECK(w.labels[0] == 1);  // 4 vs 4 tie; label 1 appears first
  CHECK(w.labels[1] == 2);  // 2 vs 6 majority
}

TEST_CASE("signal shorter than one window is a parameter error") {
  Matrix sig(1, 100);
  for (std::size_t t = 0; t < 100; ++t) sig(0, t) = 1.0;
  CHECK_THROWS_AS(rms_features(make_signal(sig, 4000.0), 300.0, 100.0,
                               flat_annotations(100), "d"),
                  ParameterError);
}
