#pragma once

// Explicit-formula machinery on the multiplicative group R_+^*: test
// functions sampled on a uniform grid in t = log u, the Weil distribution
// N(h) (primes + archimedean term), the quadratic form s(f, g) = N(f * g~)
// and the zero-side pairing against a table of zeta ordinates.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tropos::weil {

inline constexpr double kDefaultStep = 1.0 / 1024.0;

/// A compactly supported function on (0, inf).  Values live on the log
/// grid t_i = i * step (i = first .. first + size - 1) and are interpolated
/// by local cubics; when an evaluator is present it is used instead.
class TestFunction {
 public:
  /// Samples f on the grid; f must vanish outside [a, b], 0 < a < b.
  static TestFunction sample(std::function<double(double)> f, double a, double b,
                             double step = kDefaultStep);

  /// Grid-only function (no evaluator).
  static TestFunction from_grid(std::int64_t first, std::vector<double> values, double step,
                                double a, double b);

  /// Smooth log-bump exp(-1/(1-x^2)), x the affine image of log u onto (-1, 1).
  static TestFunction bump(double a, double b, double step = kDefaultStep);

  /// exp(-(log u - c)^2 / (2 w^2)) times the log-bump, c the log-midpoint
  /// and w a quarter of the log-width.
  static TestFunction gaussian_bump(double a, double b, double step = kDefaultStep);

  static TestFunction zero(double step = kDefaultStep);

  double a() const { return a_; }
  double b() const { return b_; }
  double step() const { return step_; }
  std::int64_t first() const { return first_; }
  const std::vector<double>& values() const { return values_; }
  bool has_evaluator() const { return static_cast<bool>(eval_); }

  /// f(u).
  double operator()(double u) const;
  /// F(t) = f(e^t).
  double at_log(double t) const;
  /// Cubic interpolation of the grid only.
  double interpolate(double t) const;

  /// Same function on a finer grid.
  TestFunction resampled(double step) const;

  TestFunction operator+(const TestFunction& g) const;
  TestFunction operator*(double s) const;

 private:
  std::function<double(double)> eval_;  // u -> f(u), optional
  double a_ = 1.0;
  double b_ = 1.0;
  double step_ = kDefaultStep;
  std::int64_t first_ = 0;
  std::vector<double> values_;
};

/// Lambda(n); throws for n = 0.
double mangoldt(std::int64_t n);

/// sum_{n >= 1} f(n v).
double summation_E(const TestFunction& f, double v);

/// c = (log pi + gamma) / 2.
double weil_c();

/// int_1^inf (u^2 h(u) - h(1)) / (u^2 - 1) d*u, with d*u = du/u.
double archimedean_term(const TestFunction& h);

/// sum Lambda(n) h(n) + archimedean_term(h) + c h(1).
double weil_distribution(const TestFunction& h);

/// u -> u^{-1} g(1/u).
TestFunction involution(const TestFunction& g);

/// (f * g)(u) = int f(v) g(u/v) d*v.
TestFunction mult_convolve(const TestFunction& f, const TestFunction& g);

/// s(f, g) = N(f * g~).
double quadratic_form(const TestFunction& f, const TestFunction& g);

/// int f d*u and int f du by the trapezoid rule on the grid.
double mellin_zero(const TestFunction& f);
double mellin_one(const TestFunction& f);

/// Subtracts a combination of two fixed bumps so that int f d*u and
/// int f du vanish.  The support grows to contain [0.6, 1.8].
TestFunction make_admissible(const TestFunction& f);

struct ZeroTable {
  std::vector<double> ordinates;  // gamma_k > 0 ascending, zeros 1/2 + i gamma_k
  std::vector<int> orders;        // all 1
  std::string source;

  std::size_t size() const { return ordinates.size(); }
  ZeroTable truncated(std::size_t n) const;
};

/// One ordinate per line; blank lines and '#' comments skipped.
ZeroTable load_zeros(const std::filesystem::path& path);

struct CountingTerms {
  double linear;     // int f(u) du
  double constant;   // int f(u) d*u
  double zero_sum;   // sum over pairs rho, rho-bar of 2 int u^{-1/2} cos(gamma log u) f(u) du
  double total() const { return linear + constant - zero_sum; }
};

/// Zero side of int N(u) f(u) d*u using the first `zeros` entries of Z
/// (0 = all).  Support of f must lie in (1, inf).
CountingTerms counting_terms(const TestFunction& f, const ZeroTable& Z, std::size_t zeros = 0);
double counting_pair(const TestFunction& f, const ZeroTable& Z, std::size_t zeros = 0);

/// zeta'(-1), 30 digits.
inline constexpr double kZetaPrimeMinusOne = -0.165421143700450929213919660243;

struct OmegaTerms {
  double half;
  double gamma_half;
  double log4pi_half;
  double zeta_ratio;  // -zeta'(-1)/zeta(-1)
  double total() const { return half + gamma_half + log4pi_half + zeta_ratio; }
};

OmegaTerms omega_terms(double zeta_prime_minus_one = kZetaPrimeMinusOne);
double omega_at_one(double zeta_prime_minus_one = kZetaPrimeMinusOne);

}  // namespace tropos::weil
