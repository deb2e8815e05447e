// Timing comparison of the serial reference kernels against the OpenMP
// variants, on shapes matching a long recording session. Also verifies the
// two paths agree bit-for-bit before trusting the numbers.
//
//   kernel_bench [samples] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "emgalign/kernels.hpp"
#include "emgalign/matrix.hpp"
#include "emgalign/rng.hpp"
#include "emgalign/signal.hpp"

using namespace emgalign;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
double time_best(int repeats, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-16s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 400000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const std::size_t channels = 8;

  std::printf("OpenMP %s, max threads %d, %zu channels x %zu samples, best of %d\n\n",
              kernels::openmp_enabled() ? "enabled" : "disabled", kernels::max_threads(),
              channels, samples, repeats);

  Rng rng(1234);
  Matrix signal(channels, samples);
  for (std::size_t i = 0; i < channels * samples; ++i) signal.data()[i] = rng.normal();

  // FIR convolution (15 taps)
  const FirFilter band = design_bandpass(2.0, 1000.0, 4000.0, 15);
  Matrix conv_s, conv_p;
  const double t_conv_s = time_best(
      repeats, [&] { conv_s = kernels::convolve_fir(band.taps, signal, kernels::Exec::Serial); });
  const double t_conv_p = time_best(repeats, [&] {
    conv_p = kernels::convolve_fir(band.taps, signal, kernels::Exec::Parallel);
  });
  report("convolve_fir", t_conv_s, t_conv_p, conv_s == conv_p);

  // Sliding RMS windows (W=1200, S=400)
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + 1200 <= samples; s += 400) starts.push_back(s);
  Matrix rms_s, rms_p;
  const double t_rms_s = time_best(
      repeats, [&] { rms_s = kernels::rms_windows(signal, starts, 1200, kernels::Exec::Serial); });
  const double t_rms_p = time_best(repeats, [&] {
    rms_p = kernels::rms_windows(signal, starts, 1200, kernels::Exec::Parallel);
  });
  report("rms_windows", t_rms_s, t_rms_p, rms_s == rms_p);

  // Affine projection of a long feature stream (8x8 map over many columns)
  Matrix proj(channels, channels);
  for (std::size_t i = 0; i < channels * channels; ++i) proj.data()[i] = rng.normal();
  std::vector<double> sub(channels, 0.1), add(channels, 0.2);
  Matrix prj_s, prj_p;
  const double t_prj_s = time_best(repeats, [&] {
    prj_s = kernels::project_affine(proj, signal, sub, add, kernels::Exec::Serial);
  });
  const double t_prj_p = time_best(repeats, [&] {
    prj_p = kernels::project_affine(proj, signal, sub, add, kernels::Exec::Parallel);
  });
  report("project_affine", t_prj_s, t_prj_p, prj_s == prj_p);

  // One-vs-rest scoring over many windows
  Matrix weights(8, channels);
  for (std::size_t i = 0; i < 8 * channels; ++i) weights.data()[i] = rng.normal();
  std::vector<double> biases(8, 0.05);
  std::vector<int> cls_s, cls_p;
  const double t_cls_s = time_best(repeats, [&] {
    cls_s = kernels::score_argmax(weights, biases, signal, kernels::Exec::Serial);
  });
  const double t_cls_p = time_best(repeats, [&] {
    cls_p = kernels::score_argmax(weights, biases, signal, kernels::Exec::Parallel);
  });
  report("score_argmax", t_cls_s, t_cls_p, cls_s == cls_p);

  // Plain matmul on the projection shape
  Matrix mm_s, mm_p;
  const double t_mm_s =
      time_best(repeats, [&] { mm_s = kernels::matmul(proj, signal, kernels::Exec::Serial); });
  const double t_mm_p =
      time_best(repeats, [&] { mm_p = kernels::matmul(proj, signal, kernels::Exec::Parallel); });
  report("matmul", t_mm_s, t_mm_p, mm_s == mm_p);

  return 0;
}
