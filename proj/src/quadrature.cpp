#include "tropos/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tropos::quad {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double value;
  double l1;
};

Panel panel(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0, l1 = 0.0;
  const double v = GK15::integrate(f, a, b, 0, 0.0, &error, &l1);
  return {v, l1};
}

// Boost's own error estimate has a floor proportional to max|f| that does
// not shrink with the interval, so short panels would never pass its
// relative test.  Compare a panel against its two halves instead.
double refine(const std::function<double(double)>& f, double a, double b, const Panel& whole,
              double tolerance, unsigned depth) {
  const double m = 0.5 * (a + b);
  if (m <= a || m >= b) return whole.value;
  const Panel left = panel(f, a, m), right = panel(f, m, b);
  const double sum = left.value + right.value;
  const double l1 = left.l1 + right.l1;
  const double slack = std::max(tolerance * l1, 16.0 * std::numeric_limits<double>::epsilon() * l1);
  if (std::abs(sum - whole.value) <= slack || depth == 0) return sum;
  return refine(f, a, m, left, tolerance, depth - 1) + refine(f, m, b, right, tolerance, depth - 1);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tolerance, unsigned max_depth) {
  if (a == b) return 0.0;
  return refine(f, a, b, panel(f, a, b), tolerance, max_depth);
}

double gauss_legendre8(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss;
  return gauss<double, 8>::integrate(f, a, b);
}

}  // namespace tropos::quad
