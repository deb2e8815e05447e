#pragma once

#include <cstddef>
#include <vector>

#include "emgalign/matrix.hpp"

namespace emgalign::kernels {

/// Execution policy for the data-parallel kernels. Parallel variants split
/// work over independent output elements only, so for a given input they are
/// bit-identical to the serial reference regardless of thread count.
enum class Exec { Serial, Parallel };

/// Process-wide default (Parallel when built with OpenMP, Serial otherwise).
Exec default_exec();
void set_default_exec(Exec exec);

/// True when OpenMP was available at build time.
bool openmp_enabled();
int max_threads();

// Each kernel has a serial reference implementation and an OpenMP variant;
// the two-argument overloads dispatch on Exec.

/// Dense product a(m×k) · b(k×n).
Matrix matmul(const Matrix& a, const Matrix& b, Exec exec);
void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& out);

/// Causal FIR convolution per channel, zero history, output length == input.
Matrix convolve_fir(const std::vector<double>& taps, const Matrix& in, Exec exec);
void convolve_fir_serial(const std::vector<double>& taps, const Matrix& in, Matrix& out);
void convolve_fir_parallel(const std::vector<double>& taps, const Matrix& in, Matrix& out);

/// Per-channel RMS over windows [start, start+width); one output column per window.
Matrix rms_windows(const Matrix& in, const std::vector<std::size_t>& starts,
                   std::size_t width, Exec exec);
void rms_windows_serial(const Matrix& in, const std::vector<std::size_t>& starts,
                        std::size_t width, Matrix& out);
void rms_windows_parallel(const Matrix& in, const std::vector<std::size_t>& starts,
                          std::size_t width, Matrix& out);

/// Column-wise affine map: out_col = p · (x_col - sub) + add.
Matrix project_affine(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                      const std::vector<double>& add, Exec exec);
void project_affine_serial(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                           const std::vector<double>& add, Matrix& out);
void project_affine_parallel(const Matrix& p, const Matrix& x, const std::vector<double>& sub,
                             const std::vector<double>& add, Matrix& out);

/// Per column: argmax_g (weights.row(g) · x_col + biases[g]); ties resolve to
/// the smallest g.
std::vector<int> score_argmax(const Matrix& weights, const std::vector<double>& biases,
                              const Matrix& x, Exec exec);
void score_argmax_serial(const Matrix& weights, const std::vector<double>& biases,
                         const Matrix& x, std::vector<int>& out);
void score_argmax_parallel(const Matrix& weights, const std::vector<double>& biases,
                           const Matrix& x, std::vector<int>& out);

}  // namespace emgalign::kernels
