#pragma once

// Finite exponential sums f(s) = sum_k c_k exp(-lambda_k s), their Jessen
// functions phi(sigma) (mean of log|f| along vertical lines) and zero
// counts in rectangles by the argument principle.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tropos::jessen {

using Complex = std::complex<double>;

struct Term {
  double frequency;  // lambda >= 0
  Complex coefficient;
};

class ExponentialSum {
 public:
  /// Terms with equal frequency are merged; zero coefficients dropped.
  explicit ExponentialSum(std::vector<Term> terms);

  /// "c1@f1,c2@f2,...": coefficient "re" or "re:im", frequency a number
  /// or "logN"; a missing "@f" means frequency 0.
  static ExponentialSum parse(std::string_view text);

  /// sum over n of coefficients[n-1] * n^{-s}.
  static ExponentialSum dirichlet(const std::vector<Complex>& coefficients);

  Complex operator()(Complex s) const;
  const std::vector<Term>& terms() const { return terms_; }
  double max_frequency() const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

ExponentialSum operator*(const ExponentialSum& f, const ExponentialSum& g);

/// (1/2T) int_{-T}^{T} log|f(sigma + i t)| dt, midpoint rule doubled from
/// n_nodes (0 = automatic) until two estimates agree to 1e-9.
double jessen_function(const ExponentialSum& f, double sigma, double T, std::size_t n_nodes = 0);

struct Rectangle {
  double sigma_lo;
  double sigma_hi;
  double t_lo;
  double t_hi;
};

/// Zeros with multiplicity inside the rectangle.  On a boundary failure
/// the horizontal edges are jittered by at most 0.1 (seeded), up to five
/// times.
std::int64_t zero_count(const ExponentialSum& f, const Rectangle& rect, std::uint64_t seed = 0);
std::int64_t zero_count(const ExponentialSum& f, double sigma_lo, double sigma_hi, double T,
                        std::uint64_t seed = 0);

struct DensityReport {
  std::int64_t zeros;
  double count_density;  // zeros / 2T
  double phi_density;    // (phi'(sigma_hi) - phi'(sigma_lo)) / 2 pi
  double phi_slope_lo;
  double phi_slope_hi;
  double absolute_gap;
  double relative_gap;
};

/// phi' by symmetric differences with step 1e-3.
DensityReport zero_density_check(const ExponentialSum& f, double sigma_lo, double sigma_hi,
                                 double T, std::uint64_t seed = 0);

}  // namespace tropos::jessen
