#include "tropos/newton.hpp"

#include <algorithm>

namespace tropos::newton {

namespace {

long integer_valuation(Integer n, unsigned long p) {
  long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++v;
  }
  return v;
}

// Cross product sign of (b - a) x (c - a) for hull turns.
Rational cross(const HullVertex& a, const HullVertex& b, const HullVertex& c) {
  return Rational((b.exponent - a.exponent) * (c.valuation - a.valuation) -
                  (b.valuation - a.valuation) * (c.exponent - a.exponent));
}

}  // namespace

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<long> padic_valuation(const Rational& q, unsigned long p) {
  if (q == 0) return std::nullopt;
  return integer_valuation(q.get_num(), p) - integer_valuation(q.get_den(), p);
}

ValuedSeries::ValuedSeries(unsigned long prime, std::map<long, std::optional<Rational>> valuations,
                           Interval<Rational> window)
    : prime_(prime), valuations_(std::move(valuations)), window_(std::move(window)) {
  if (!is_prime(prime_)) throw PreconditionError("p must be prime");
  if (std::none_of(valuations_.begin(), valuations_.end(),
                   [](const auto& kv) { return kv.second.has_value(); }))
    throw PreconditionError("series has no nonzero coefficient");
}

ValuedSeries ValuedSeries::from_polynomial(unsigned long prime,
                                           std::map<long, Rational> coefficients,
                                           Interval<Rational> window) {
  std::map<long, std::optional<Rational>> vals;
  for (const auto& [n, a] : coefficients) {
    auto v = padic_valuation(a, prime);
    vals[n] = v ? std::optional<Rational>(Rational(*v)) : std::nullopt;
  }
  ValuedSeries s(prime, std::move(vals), std::move(window));
  s.coefficients_ = std::move(coefficients);
  return s;
}

std::vector<HullVertex> ValuedSeries::newton_polygon() const {
  std::vector<HullVertex> hull;
  for (const auto& [n, v] : valuations_) {  // map order: increasing exponent
    if (!v) continue;
    HullVertex p{n, *v};
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(std::move(p));
  }
  return hull;
}

PiecewiseAffine<Rational> tropicalize_na(const ValuedSeries& s) {
  const auto hull = s.newton_polygon();
  // Segment i joins hull[i] and hull[i+1]; its slope m_i increases with i and
  // tau has a breakpoint at x = -m_i.  Increasing x walks the hull backwards.
  std::vector<Rational> bps;
  std::vector<Rational> slopes{Rational(-hull.back().exponent)};
  for (std::size_t i = hull.size() - 1; i-- > 0;) {
    const Rational m = (hull[i + 1].valuation - hull[i].valuation) /
                       Rational(hull[i + 1].exponent - hull[i].exponent);
    bps.push_back(-m);
    slopes.push_back(-hull[i].exponent);
  }
  const Rational x0 = bps.empty() ? Rational(0) : bps.front();
  Rational v0 = -hull.front().exponent * x0 - hull.front().valuation;
  for (const auto& h : hull) v0 = std::max(v0, Rational(-h.exponent * x0 - h.valuation));
  auto tau = PiecewiseAffine<Rational>::make({}, std::move(bps), std::move(slopes), x0, v0);
  if (s.window() == Interval<Rational>{}) return tau;
  return tau.restricted(s.window());
}

Divisor<Rational> root_valuations(const ValuedSeries& s) {
  if (s.valuations().begin()->first < 0)
    throw PreconditionError("root_valuations needs a polynomial (no negative exponents)");
  const auto hull = s.newton_polygon();
  std::vector<Atom<Rational>> atoms;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const long length = hull[i + 1].exponent - hull[i].exponent;
    const Rational m = (hull[i + 1].valuation - hull[i].valuation) / Rational(length);
    atoms.push_back({Rational(-m), Rational(length)});
  }
  return Divisor<Rational>(std::move(atoms)).restricted(s.window());
}

namespace {

Interval<Rational> intersect(const Interval<Rational>& a, const Interval<Rational>& b) {
  Interval<Rational> out = a;
  if (b.lo && (!out.lo || *out.lo < *b.lo)) out.lo = b.lo;
  if (b.hi && (!out.hi || *b.hi < *out.hi)) out.hi = b.hi;
  return out;
}

}  // namespace

ValuedSeries series_product_valuations(const ValuedSeries& s, const ValuedSeries& t) {
  if (s.prime() != t.prime()) throw PreconditionError("prime mismatch");
  if (!s.coefficients() || !t.coefficients())
    throw PreconditionError("product needs polynomial-backed series");
  std::map<long, Rational> prod;
  for (const auto& [n, a] : *s.coefficients())
    for (const auto& [m, b] : *t.coefficients()) prod[n + m] += a * b;
  return ValuedSeries::from_polynomial(s.prime(), std::move(prod), intersect(s.window(), t.window()));
}

ValuedSeries substitute_power(const ValuedSeries& s, long n) {
  if (n < 1) throw PreconditionError("substitution power must be positive");
  Interval<Rational> window;
  if (s.window().lo) window.lo = Rational(*s.window().lo / n);
  if (s.window().hi) window.hi = Rational(*s.window().hi / n);
  if (s.coefficients()) {
    std::map<long, Rational> coeffs;
    for (const auto& [e, a] : *s.coefficients()) coeffs[e * n] = a;
    return ValuedSeries::from_polynomial(s.prime(), std::move(coeffs), window);
  }
  std::map<long, std::optional<Rational>> vals;
  for (const auto& [e, v] : s.valuations()) vals[e * n] = v;
  return ValuedSeries(s.prime(), std::move(vals), window);
}

std::map<long, Rational> polynomial_from_roots(const std::vector<Rational>& roots,
                                               const Rational& leading) {
  std::vector<Rational> c{leading};  // c[k] is the coefficient of X^k
  for (const auto& r : roots) {
    std::vector<Rational> next(c.size() + 1, Rational(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::map<long, Rational> out;
  for (std::size_t k = 0; k < c.size(); ++k) out[static_cast<long>(k)] = c[k];
  return out;
}

}  // namespace tropos::newton
