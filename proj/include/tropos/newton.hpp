#pragma once

// Non-archimedean tropicalization of Laurent polynomials over Q.
//
// Only the valuation data (exponent -> p-adic valuation of the coefficient)
// enters the tropicalization; the actual rational coefficients are kept
// when available so products can be formed exactly.

#include <map>
#include <optional>
#include <vector>

#include "tropos/pwa.hpp"
#include "tropos/rational.hpp"

namespace tropos::newton {

/// p-adic valuation of a rational; empty for 0 (valuation +infinity).
std::optional<long> padic_valuation(const Rational& q, unsigned long p);

bool is_prime(unsigned long n);

struct HullVertex {
  long exponent;
  Rational valuation;
};

class ValuedSeries {
 public:
  /// Valuations keyed by exponent; an empty optional marks a zero
  /// coefficient.  `window` is the x-interval where tau is considered.
  ValuedSeries(unsigned long prime, std::map<long, std::optional<Rational>> valuations,
               Interval<Rational> window = {});

  /// Valuation data computed from explicit rational coefficients.
  static ValuedSeries from_polynomial(unsigned long prime, std::map<long, Rational> coefficients,
                                      Interval<Rational> window = {});

  unsigned long prime() const { return prime_; }
  const std::map<long, std::optional<Rational>>& valuations() const { return valuations_; }
  const Interval<Rational>& window() const { return window_; }
  const std::optional<std::map<long, Rational>>& coefficients() const { return coefficients_; }

  /// Lower convex hull of the points (n, v(a_n)), collinear points dropped.
  std::vector<HullVertex> newton_polygon() const;

 private:
  unsigned long prime_;
  std::map<long, std::optional<Rational>> valuations_;
  Interval<Rational> window_;
  std::optional<std::map<long, Rational>> coefficients_;
};

/// tau(x) = max_n { -n x - v(a_n) } on the window.
PiecewiseAffine<Rational> tropicalize_na(const ValuedSeries& s);

/// Root valuations read off the Newton polygon (segment of slope m and
/// length l gives l roots of valuation -m), restricted to the window.
/// Throws PreconditionError for negative exponents.
Divisor<Rational> root_valuations(const ValuedSeries& s);

/// Exact product of two polynomial-backed series.
ValuedSeries series_product_valuations(const ValuedSeries& s, const ValuedSeries& t);

/// X -> X^n; the window is divided by n.
ValuedSeries substitute_power(const ValuedSeries& s, long n);

/// Expands prod (X - r_i) over Q.
std::map<long, Rational> polynomial_from_roots(const std::vector<Rational>& roots,
                                               const Rational& leading = 1);

}  // namespace tropos::newton
