// Serial reference implementations. The OpenMP variants in
// kernels_parallel.cpp must stay bit-identical to these loops; every parallel
// kernel distributes whole output elements and reuses the same inner
// arithmetic order.

#include <cmath>

#include "emgalign/kernels.hpp"

namespace emgalign::kernels {

void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a(i, p) * b(p, j);
      out(i, j) = acc;
    }
  }
}

void convolve_fir_serial(const std::vector<double>& taps, const Matrix& in, Matrix& out) {
  const std::size_t channels = in.rows(), samples = in.cols(), k = taps.size();
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t t = 0; t < samples; ++t) {
      double acc = 0.0;
      const std::size_t kmax = std::min(k, t + 1);
      for (std::size_t i = 0; i < kmax; ++i) acc += taps[i] * in(c, t - i);
      out(c, t) = acc;
    }
  }
}

void rms_windows_serial(const Matrix& in, const std::vector<std::size_t>& starts,
                        std::size_t width, Matrix& out) {
  const std::size_t channels = in.rows();
  for (std::size_t w = 0; w < starts.size(); ++w) {
    const std::size_t s = starts[w];
    for (std::size_t c = 0; c < channels; ++c) {
      double acc = 0.0;
      for (std::size_t t = s; t < s + width; ++t) acc += in(c, t) * in(c, t);
      out(c, w) = std::sqrt(acc / static_cast<double>(width));
    }
  }
}

void project_affine_serial(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                           const std::vector<double>& add, Matrix& out) {
  const std::size_t n = p.rows(), k = p.cols(), cols = x.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t q = 0; q < k; ++q) acc += p(i, q) * (x(q, j) - sub[q]);
      out(i, j) = acc + add[i];
    }
  }
}

void score_argmax_serial(const Matrix& weights, const std::vector<double>& biases,
                         const Matrix& x, std::vector<int>& out) {
  const std::size_t g = weights.rows(), n = weights.cols(), cols = x.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    int best = 0;
    double best_score = 0.0;
    for (std::size_t c = 0; c < g; ++c) {
      double acc = biases[c];
      for (std::size_t q = 0; q < n; ++q) acc += weights(c, q) * x(q, j);
      if (c == 0 || acc > best_score) {  // strict >, ties keep the smaller id
        best = static_cast<int>(c);
        best_score = acc;
      }
    }
    out[j] = best;
  }
}

}  // namespace emgalign::kernels
