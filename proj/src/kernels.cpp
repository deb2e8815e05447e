#include "emgalign/kernels.hpp"

#include <atomic>

#include "emgalign/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace emgalign::kernels {

namespace {
std::atomic<Exec> g_default{
#ifdef _OPENMP
    Exec::Parallel
#else
    Exec::Serial
#endif
};
}  // namespace

Exec default_exec() { return g_default.load(); }
void set_default_exec(Exec exec) { g_default.store(exec); }

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix matmul(const Matrix& a, const Matrix& b, Exec exec) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix out(a.rows(), b.cols());
  if (exec == Exec::Parallel)
    matmul_parallel(a, b, out);
  else
    matmul_serial(a, b, out);
  return out;
}

Matrix convolve_fir(const std::vector<double>& taps, const Matrix& in, Exec exec) {
  if (taps.empty()) throw ParameterError("convolve_fir: empty tap vector");
  Matrix out(in.rows(), in.cols());
  if (exec == Exec::Parallel)
    convolve_fir_parallel(taps, in, out);
  else
    convolve_fir_serial(taps, in, out);
  return out;
}

Matrix rms_windows(const Matrix& in, const std::vector<std::size_t>& starts,
                   std::size_t width, Exec exec) {
  if (width == 0) throw ParameterError("rms_windows: zero window width");
  if (starts.empty()) throw ParameterError("rms_windows: no windows");
  for (std::size_t s : starts) {
    if (s + width > in.cols())
      throw DimensionError("rms_windows: window [" + std::to_string(s) + ", " +
                           std::to_string(s + width) + ") exceeds " +
                           std::to_string(in.cols()) + " samples");
  }
  Matrix out(in.rows(), starts.size());
  if (exec == Exec::Parallel)
    rms_windows_parallel(in, starts, width, out);
  else
    rms_windows_serial(in, starts, width, out);
  return out;
}

Matrix project_affine(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                      const std::vector<double>& add, Exec exec) {
  if (p.cols() != x.rows() || sub.size() != x.rows() || add.size() != p.rows())
    throw DimensionError("project_affine: incompatible shapes");
  Matrix out(p.rows(), x.cols());
  if (exec == Exec::Parallel)
    project_affine_parallel(p, x, sub, add, out);
  else
    project_affine_serial(p, x, sub, add, out);
  return out;
}

std::vector<int> score_argmax(const Matrix& weights, const std::vector<double>& biases,
                              const Matrix& x, Exec exec) {
  if (weights.cols() != x.rows() || biases.size() != weights.rows())
    throw DimensionError("score_argmax: incompatible shapes");
  std::vector<int> out(x.cols());
  if (exec == Exec::Parallel)
    score_argmax_parallel(weights, biases, x, out);
  else
    score_argmax_serial(weights, biases, x, out);
  return out;
}

}  // namespace emgalign::kernels
