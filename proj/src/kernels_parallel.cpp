// OpenMP variants of the kernels. Each loop parallelizes over whole output
// elements (columns or channel rows); the per-element arithmetic is the same
// expression in the same order as the serial reference, so results are
// bit-identical for any thread count. Falls back to the serial reference
// when built without OpenMP.

#include <cmath>
#include <cstdint>

#include "emgalign/kernels.hpp"

namespace emgalign::kernels {

void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& out) {
#ifdef _OPENMP
  const std::int64_t m = static_cast<std::int64_t>(a.rows());
  const std::int64_t k = static_cast<std::int64_t>(a.cols());
  const std::int64_t n = static_cast<std::int64_t>(b.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::int64_t p = 0; p < k; ++p) acc += a(i, p) * b(p, j);
      out(i, j) = acc;
    }
  }
#else
  matmul_serial(a, b, out);
#endif
}

void convolve_fir_parallel(const std::vector<double>& taps, const Matrix& in, Matrix& out) {
#ifdef _OPENMP
  const std::int64_t channels = static_cast<std::int64_t>(in.rows());
  const std::int64_t samples = static_cast<std::int64_t>(in.cols());
  const std::size_t k = taps.size();
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t c = 0; c < channels; ++c) {
    for (std::int64_t t = 0; t < samples; ++t) {
      double acc = 0.0;
      const std::size_t kmax = std::min(k, static_cast<std::size_t>(t) + 1);
      for (std::size_t i = 0; i < kmax; ++i) acc += taps[i] * in(c, t - i);
      out(c, t) = acc;
    }
  }
#else
  convolve_fir_serial(taps, in, out);
#endif
}

void rms_windows_parallel(const Matrix& in, const std::vector<std::size_t>& starts,
                          std::size_t width, Matrix& out) {
#ifdef _OPENMP
  const std::int64_t windows = static_cast<std::int64_t>(starts.size());
  const std::size_t channels = in.rows();
#pragma omp parallel for schedule(static)
  for (std::int64_t w = 0; w < windows; ++w) {
    const std::size_t s = starts[static_cast<std::size_t>(w)];
    for (std::size_t c = 0; c < channels; ++c) {
      double acc = 0.0;
      for (std::size_t t = s; t < s + width; ++t) acc += in(c, t) * in(c, t);
      out(c, static_cast<std::size_t>(w)) = std::sqrt(acc / static_cast<double>(width));
    }
  }
#else
  rms_windows_serial(in, starts, width, out);
#endif
}

void project_affine_parallel(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                             const std::vector<double>& add, Matrix& out) {
#ifdef _OPENMP
  const std::size_t n = p.rows(), k = p.cols();
  const std::int64_t cols = static_cast<std::int64_t>(x.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q < k; ++q) acc += p(i, q) * (x(q, j) - sub[q]);
      out(i, j) = acc + add[i];
    }
  }
#else
  project_affine_serial(p, x, sub, add, out);
#endif
}

void score_argmax_parallel(const Matrix& weights, const std::vector<double>& biases,
                           const Matrix& x, std::vector<int>& out) {
#ifdef _OPENMP
  const std::size_t g = weights.rows(), n = weights.cols();
  const std::int64_t cols = static_cast<std::int64_t>(x.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    int best = 0;
    double best_score = 0.0;
    for (std::size_t c = 0; c < g; ++c) {
      double acc = biases[c];
      for (std::size_t q = 0; q < n; ++q) acc += weights(c, q) * x(q, j);
      if (c == 0 || acc > best_score) {
        best = static_cast<int>(c);
        best_score = acc;
      }
    }
    out[j] = best;
  }
#else
  score_argmax_serial(weights, biases, x, out);
#endif
}

}  // namespace emgalign::kernels
