#pragma once

// Per-node terms shared by the serial and OpenMP kernels.  Keeping them in
// one place is what makes the two variants agree bit for bit.

#include <cmath>
#include <numbers>

#include "tropos/kernels.hpp"

namespace tropos::kernels::detail {

inline Complex circle_node(double radius, std::size_t k, std::size_t n, double offset) {
  const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) /
                       static_cast<double>(n);
  return std::polar(radius, theta);
}

inline double line_node(double t_lo, double width, std::size_t k, double offset) {
  return t_lo + (static_cast<double>(k) + 0.5 + offset) * width;
}

inline double convolution_term(std::span<const double> a, std::span<const double> b,
                               std::size_t k) {
  const std::size_t nb = b.size();
  const std::size_t i_lo = k + 1 > nb ? k + 1 - nb : 0;
  const std::size_t i_hi = std::min(k, a.size() - 1);
  double acc = 0.0;
  for (std::size_t i = i_lo; i <= i_hi; ++i) acc += a[i] * b[k - i];
  return acc;
}

inline double cosine_term(std::span<const double> weights, std::span<const double> nodes,
                          double gamma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * std::cos(gamma * nodes[i]);
  return 2.0 * acc;
}

inline ArgumentTrace trace_from_values(std::span<const Complex> values) {
  ArgumentTrace out;
  const std::size_t n = values.size();
  std::vector<double> steps(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = values[k];
    const Complex b = values[(k + 1) % n];
    if (a == Complex{} || b == Complex{}) {
      out.hit_zero = true;
      return out;
    }
    steps[k] = std::arg(b / a);
    out.max_step = std::max(out.max_step, std::abs(steps[k]));
    out.max_log_ratio = std::max(out.max_log_ratio, std::abs(std::log(std::abs(b) / std::abs(a))));
  }
  out.total = pairwise_sum(steps);
  return out;
}

}  // namespace tropos::kernels::detail
