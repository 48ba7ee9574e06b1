#include "tropos/rational.hpp"

#include <cmath>

#include "tropos/errors.hpp"

namespace tropos {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t first = 0;
  while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
  s = s.substr(first);
  if (s.empty()) throw PreconditionError("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);

  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw PreconditionError("mixed decimal/fraction: " + s);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t scale = s.size() - dot - 1;
      if (digits.empty() || digits == "-") throw PreconditionError("bad decimal: " + s);
      Rational out{Integer(digits, 10), 1};
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
      out /= den;
      out.canonicalize();
      return out;
    }
    Rational out(s, 10);
    if (out.get_den() == 0) throw PreconditionError("zero denominator: " + s);
    out.canonicalize();
    return out;
  } catch (const std::invalid_argument&) {
    throw PreconditionError("not a rational literal: " + s);
  }
}

Rational power(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw PreconditionError("zero to a negative power");
    Rational inv = 1 / base;
    return power(inv, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite value has no rational form");
  Rational out(x);
  return out;
}

}  // namespace tropos
