#include <cmath>

#include "kernel_terms.hpp"

namespace tropos::kernels {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 16;
  if (values.size() <= kBlock) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace serial {

std::optional<double> circle_log_mean(const ComplexFn& f, double radius, std::size_t n,
                                      double offset) {
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(f(detail::circle_node(radius, k, n, offset)));
    if (m == 0.0) return std::nullopt;
    terms[k] = std::log(m);
  }
  return pairwise_sum(terms) / static_cast<double>(n);
}

ArgumentTrace circle_argument(const ComplexFn& f, double radius, std::size_t n) {
  std::vector<Complex> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = f(detail::circle_node(radius, k, n, 0.0));
  return detail::trace_from_values(values);
}

std::optional<double> line_log_mean(const ComplexFn& f, double sigma, double t_lo,
                                    double t_hi, std::size_t n, double offset) {
  const double width = (t_hi - t_lo) / static_cast<double>(n);
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(f({sigma, detail::line_node(t_lo, width, k, offset)}));
    if (m == 0.0) return std::nullopt;
    terms[k] = std::log(m);
  }
  return pairwise_sum(terms) / static_cast<double>(n);
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double h) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = h * detail::convolution_term(a, b, k);
  return out;
}

double cosine_sum(std::span<const double> weights, std::span<const double> nodes,
                  std::span<const double> gammas) {
  std::vector<double> terms(gammas.size());
  for (std::size_t g = 0; g < gammas.size(); ++g)
    terms[g] = detail::cosine_term(weights, nodes, gammas[g]);
  return pairwise_sum(terms);
}

std::vector<double> map(const RealFn& f, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return out;
}

}  // namespace serial
}  // namespace tropos::kernels
