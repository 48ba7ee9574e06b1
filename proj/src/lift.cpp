#include "tropos/lift.hpp"

#include <cmath>

#include "tropos/errors.hpp"
#include "tropos/quadrature.hpp"

namespace tropos::lift {

Density::Density(std::function<double(double)> f, double lo, double hi)
    : f_(std::move(f)), lo_(lo), hi_(hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw PreconditionError("density support must be a finite interval");
  cumulative_.assign(kPanels + 1, 0.0);
  const double w = (hi - lo) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double a = lo + i * w;
    const double b = i + 1 == kPanels ? hi : a + w;
    for (int probe = 0; probe <= 4; ++probe) {
      if (f_(a + probe * (b - a) / 4) < 0.0) throw PreconditionError("density is negative");
    }
    cumulative_[i + 1] = cumulative_[i] + quad::adaptive(f_, a, b);
  }
  mass_ = cumulative_.back();
  if (!(mass_ > 0.0) || !std::isfinite(mass_))
    throw PreconditionError("density mass must be finite and positive");
}

Density Density::polynomial(std::vector<double> coefficients, double lo, double hi) {
  return Density(
      [c = std::move(coefficients)](double x) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        return v;
      },
      lo, hi);
}

double Density::operator()(double x) const { return x < lo_ || x > hi_ ? 0.0 : f_(x); }

double Density::cdf(double a) const {
  if (a <= lo_) return 0.0;
  if (a >= hi_) return 1.0;
  const double w = (hi_ - lo_) / kPanels;
  const int i = std::min(kPanels - 1, static_cast<int>((a - lo_) / w));
  const double left = lo_ + i * w;
  return (cumulative_[i] + quad::adaptive(f_, left, a)) / mass_;
}

double Density::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw PreconditionError("quantile level outside [0, 1]");
  if (u == 0.0) return lo_;
  if (u == 1.0) return hi_;
  double a = lo_;
  double b = hi_;
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (cdf(m) < u)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

DensityDivisor figure4_divisor() {
  return {Density::polynomial({0.0, 1.0, -1.0}, 0.0, 1.0),
          Density::polynomial({0.0, 2.0, -4.0, 2.0}, 0.0, 1.0)};
}

double DiscreteLift::position(std::int64_t k, int sign) const {
  if (k < -K || k > K) throw PreconditionError("height outside the lift");
  return points[static_cast<std::size_t>(2 * (k + K) + (sign > 0 ? 0 : 1))].position;
}

DiscreteLift build_lift(const DensityDivisor& d, std::int64_t K, const apseq::APSequence& seq) {
  if (K < 1) throw PreconditionError("K must be at least 1");
  const double wp = d.plus.mass();
  const double wm = d.minus.mass();
  if (std::abs(wp - wm) > 1e-10 * std::max(wp, wm))
    throw PreconditionError("plus and minus masses differ");
  DiscreteLift out;
  out.K = K;
  out.mass = wp;
  out.points.resize(static_cast<std::size_t>(2 * (2 * K + 1)));
  const long long n = 2 * K + 1;
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < n; ++i) {
    const std::int64_t k = i - K;
    const double u = to_double(seq(k));
    out.points[2 * i] = {d.plus.quantile(u), k, +1};
    out.points[2 * i + 1] = {d.minus.quantile(u), k, -1};
  }
  return out;
}

double pair_with_test(const DiscreteLift& lift, const std::function<double(double)>& psi,
                      std::int64_t T) {
  if (T < 1 || T > lift.K) throw PreconditionError("T must satisfy 1 <= T <= K");
  double sum = 0.0;
  for (std::int64_t k = -T; k <= T; ++k) sum += psi(lift.position(k, +1)) - psi(lift.position(k, -1));
  return sum / (2.0 * static_cast<double>(T));
}

double strip_fraction(const DiscreteLift& lift, int sign, double s1, double s2, std::int64_t T) {
  if (T < 1 || T > lift.K) throw PreconditionError("T must satisfy 1 <= T <= K");
  std::int64_t count = 0;
  for (std::int64_t k = -T; k <= T; ++k) {
    const double x = lift.position(k, sign);
    if (x >= s1 && x <= s2) ++count;
  }
  return static_cast<double>(count) / (2.0 * static_cast<double>(T));
}

}  // namespace tropos::lift
