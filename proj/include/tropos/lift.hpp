#pragma once

// Discrete lifts of signed densities on the line: each integer height k
// carries one positive and one negative point placed at the quantiles
// h_+(U(k)) and h_-(U(k)).

#include <cstdint>
#include <functional>
#include <vector>

#include "tropos/apseq.hpp"

namespace tropos::lift {

/// A nonnegative density supported on [lo, hi].
class Density {
 public:
  Density(std::function<double(double)> f, double lo, double hi);

  /// sum_j c_j x^j on [lo, hi].
  static Density polynomial(std::vector<double> coefficients, double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mass() const { return mass_; }

  /// Raw density (zero outside the support).
  double operator()(double x) const;

  /// Normalized distribution function int_lo^a f / mass.
  double cdf(double a) const;

  /// a with cdf(a) = u, bisection to 1e-12.
  double quantile(double u) const;

 private:
  static constexpr int kPanels = 64;
  std::function<double(double)> f_;
  double lo_;
  double hi_;
  double mass_ = 0.0;
  std::vector<double> cumulative_;  // unnormalized mass left of each panel edge
};

struct DensityDivisor {
  Density plus;
  Density minus;
};

/// f_+ = x(1-x), f_- = 2x(1-x)^2 on [0, 1].
DensityDivisor figure4_divisor();

struct LiftPoint {
  double position;
  std::int64_t height;
  int sign;
};

struct DiscreteLift {
  std::int64_t K = 0;
  double mass = 0.0;  // common mass w; pairings are normalized by it
  std::vector<LiftPoint> points;  // (+, -) per height, heights ascending

  double position(std::int64_t k, int sign) const;
};

/// Rejects unequal masses and K < 1.
DiscreteLift build_lift(const DensityDivisor& d, std::int64_t K, const apseq::APSequence& seq);

/// (1/2T) sum_{|k|<=T} [psi(pos_+(k)) - psi(pos_-(k))].
double pair_with_test(const DiscreteLift& lift, const std::function<double(double)>& psi,
                      std::int64_t T);

/// #{|k| <= T : pos_sign(k) in [s1, s2]} / 2T.
double strip_fraction(const DiscreteLift& lift, int sign, double s1, double s2, std::int64_t T);

}  // namespace tropos::lift
