#include <omp.h>

#include <atomic>
#include <cmath>

#include "kernel_terms.hpp"

namespace tropos::kernels {

void set_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

namespace parallel {

namespace {

// Signed loop index for OpenMP; node counts are far below 2^62.
using Index = long long;

}  // namespace

std::optional<double> circle_log_mean(const ComplexFn& f, double radius, std::size_t n,
                                      double offset) {
  std::vector<double> terms(n);
  std::atomic<bool> zero{false};
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < static_cast<Index>(n); ++k) {
    const double m = std::abs(f(detail::circle_node(radius, k, n, offset)));
    if (m == 0.0) zero = true;
    terms[k] = m == 0.0 ? 0.0 : std::log(m);
  }
  if (zero) return std::nullopt;
  return pairwise_sum(terms) / static_cast<double>(n);
}

ArgumentTrace circle_argument(const ComplexFn& f, double radius, std::size_t n) {
  std::vector<Complex> values(n);
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < static_cast<Index>(n); ++k)
    values[k] = f(detail::circle_node(radius, k, n, 0.0));
  return detail::trace_from_values(values);
}

std::optional<double> line_log_mean(const ComplexFn& f, double sigma, double t_lo,
                                    double t_hi, std::size_t n, double offset) {
  const double width = (t_hi - t_lo) / static_cast<double>(n);
  std::vector<double> terms(n);
  std::atomic<bool> zero{false};
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < static_cast<Index>(n); ++k) {
    const double m = std::abs(f({sigma, detail::line_node(t_lo, width, k, offset)}));
    if (m == 0.0) zero = true;
    terms[k] = m == 0.0 ? 0.0 : std::log(m);
  }
  if (zero) return std::nullopt;
  return pairwise_sum(terms) / static_cast<double>(n);
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double h) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1);
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < static_cast<Index>(out.size()); ++k)
    out[k] = h * detail::convolution_term(a, b, k);
  return out;
}

double cosine_sum(std::span<const double> weights, std::span<const double> nodes,
                  std::span<const double> gammas) {
  std::vector<double> terms(gammas.size());
#pragma omp parallel for schedule(static)
  for (Index g = 0; g < static_cast<Index>(gammas.size()); ++g)
    terms[g] = detail::cosine_term(weights, nodes, gammas[g]);
  return pairwise_sum(terms);
}

std::vector<double> map(const RealFn& f, std::span<const double> xs) {
  std::vector<double> out(xs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < static_cast<Index>(xs.size()); ++i) out[i] = f(xs[i]);
  return out;
}

}  // namespace parallel
}  // namespace tropos::kernels
