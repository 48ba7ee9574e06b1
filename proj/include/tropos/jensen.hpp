#pragma once

// Archimedean tropicalization: circle means of log|f| (Jensen integrals)
// and winding numbers of analytic functions on an annulus.

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tropos/pwa.hpp"

namespace tropos::jensen {

using Complex = std::complex<double>;

/// An analytic function on the annulus r_inner < |z| < r_outer.  The
/// evaluator must be safe to call concurrently.
struct AnnulusFunction {
  std::function<Complex(Complex)> evaluate;
  double r_inner = 0.0;
  double r_outer = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Complex, int>> known_zeros;

  /// The x-interval (-log r_outer, -log r_inner).
  Interval<double> x_window() const;
};

/// leading * prod (z - a_i)^{m_i}; zeros recorded for oracle use.
AnnulusFunction from_roots(std::vector<std::pair<Complex, int>> roots, Complex leading = 1.0,
                           double r_inner = 0.0,
                           double r_outer = std::numeric_limits<double>::infinity());

/// sum_k c_k z^k (Horner).
AnnulusFunction from_coefficients(std::vector<Complex> coefficients, double r_inner = 0.0,
                                  double r_outer = std::numeric_limits<double>::infinity());

/// sum_k c_k exp(w_k z).
AnnulusFunction exponential_sum(std::vector<std::pair<Complex, Complex>> terms,
                                double r_inner = 0.0,
                                double r_outer = std::numeric_limits<double>::infinity());

AnnulusFunction product(const AnnulusFunction& f, const AnnulusFunction& g);

/// z -> f(z^n) on the annulus r^{1/n}.
AnnulusFunction compose_power(const AnnulusFunction& f, int n);

/// (1/2pi) int_0^{2pi} log|f(e^{-x+i theta})| d theta by the trapezoid rule,
/// doubling from n_nodes until two estimates agree to 1e-10.
double tropicalize_c(const AnnulusFunction& f, double x, std::size_t n_nodes = 64);

/// Winding number of theta -> f(e^{-x+i theta}); equals -tau'(x).
int winding_number(const AnnulusFunction& f, double x, std::size_t n_nodes = 1024);

struct ProfileOptions {
  std::size_t winding_nodes = 4096;
  std::size_t mean_nodes = 64;
  double breakpoint_width = 1e-6;
};

/// Integral-slope piecewise-affine approximation of tau(f) on the grid
/// span, breakpoints localized by winding-number bisection.
PiecewiseAffine<double> tropical_profile(const AnnulusFunction& f, std::span<const double> grid,
                                         const ProfileOptions& options = {});

}  // namespace tropos::jensen
