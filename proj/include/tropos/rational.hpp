#pragma once

#include <gmpxx.h>

#include <string>
#include <type_traits>
#include <utility>
#include <string_view>

namespace tropos {

using Integer = mpz_class;

/// mpq_class whose numerator/denominator constructor canonicalizes, so
/// Rational(4, 2) == Rational(2) compares and prints as expected.
class Rational : public mpq_class {
 public:
  using mpq_class::mpq_class;
  using mpq_class::operator=;

  Rational() = default;
  Rational(const Rational&) = default;
  Rational(Rational&&) = default;
  Rational& operator=(const Rational&) = default;
  Rational& operator=(Rational&&) = default;
  Rational(const mpq_class& q) : mpq_class(q) {}
  Rational(mpq_class&& q) : mpq_class(std::move(q)) {}

  template <class N, class D>
    requires(!std::is_floating_point_v<N> && !std::is_floating_point_v<D> &&
             !std::is_pointer_v<std::decay_t<N>>)
  Rational(const N& num, const D& den) : mpq_class(num, den) {
    canonicalize();
  }
};

/// Canonical "p/q" form, denominator always written (e.g. "3/1").
std::string to_string(const Rational& q);

/// Accepts "p/q", integers and finite decimals ("-1.25" -> -5/4).
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// base^exponent for a possibly negative integer exponent.
Rational power(const Rational& base, long exponent);

/// Exact conversion of a finite double.
Rational exact_rational(double x);

}  // namespace tropos
