#pragma once

// Data-parallel inner loops shared by the analytic modules.  Every kernel
// exists twice: `serial` is the plain reference loop kept for testing and
// benchmarking, `parallel` is the OpenMP version the library calls.  Both
// compute the per-node terms identically and reduce them with the same
// pairwise tree, so their results agree bit for bit.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tropos::kernels {

using Complex = std::complex<double>;
using ComplexFn = std::function<Complex(Complex)>;
using RealFn = std::function<double(double)>;

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

struct ArgumentTrace {
  double total = 0.0;     // sum of principal arguments of f(z_{k+1})/f(z_k)
  double max_step = 0.0;  // largest |step|
  double max_log_ratio = 0.0;  // largest |log|f(z_{k+1})/f(z_k)||
  bool hit_zero = false;  // some node evaluated to exactly 0
};

namespace serial {

/// Mean of log|f| over n equispaced points radius*exp(2 pi i (k+offset)/n).
/// nullopt if f vanishes at a node.
std::optional<double> circle_log_mean(const ComplexFn& f, double radius, std::size_t n,
                                      double offset);

ArgumentTrace circle_argument(const ComplexFn& f, double radius, std::size_t n);

/// Midpoint-rule mean of log|f(sigma + i t)| over [t_lo, t_hi] with n cells,
/// nodes shifted by offset cells.  nullopt if f vanishes at a node.
std::optional<double> line_log_mean(const ComplexFn& f, double sigma, double t_lo,
                                    double t_hi, std::size_t n, double offset);

/// c_k = h * sum_i a_i b_{k-i}, size a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double h);

/// sum over gamma of 2 * sum_i w_i cos(gamma t_i).
double cosine_sum(std::span<const double> weights, std::span<const double> nodes,
                  std::span<const double> gammas);

std::vector<double> map(const RealFn& f, std::span<const double> xs);

}  // namespace serial

namespace parallel {

/// Mean of log|f| over n equispaced points radius*exp(2 pi i (k+offset)/n).
/// nullopt if f vanishes at a node.
std::optional<double> circle_log_mean(const ComplexFn& f, double radius, std::size_t n,
                                      double offset);

ArgumentTrace circle_argument(const ComplexFn& f, double radius, std::size_t n);

/// Midpoint-rule mean of log|f(sigma + i t)| over [t_lo, t_hi] with n cells,
/// nodes shifted by offset cells.  nullopt if f vanishes at a node.
std::optional<double> line_log_mean(const ComplexFn& f, double sigma, double t_lo,
                                    double t_hi, std::size_t n, double offset);

/// c_k = h * sum_i a_i b_{k-i}, size a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double h);

/// sum over gamma of 2 * sum_i w_i cos(gamma t_i).
double cosine_sum(std::span<const double> weights, std::span<const double> nodes,
                  std::span<const double> gammas);

std::vector<double> map(const RealFn& f, std::span<const double> xs);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels use (0 = runtime default).
void set_threads(int threads);

}  // namespace tropos::kernels
