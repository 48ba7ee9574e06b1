#pragma once

#include <functional>

namespace tropos::quad {

/// Adaptive Gauss-Kronrod (15-point) on a finite interval: a panel is
/// bisected until its halves agree with it to tolerance * L1 (or roundoff).
double adaptive(const std::function<double(double)>& f, double a, double b,
                double tolerance = 1e-12, unsigned max_depth = 20);

/// 8-point Gauss-Legendre on [a, b]; exact for polynomials of degree <= 15.
double gauss_legendre8(const std::function<double(double)>& f, double a, double b);

}  // namespace tropos::quad
