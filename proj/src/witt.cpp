#include "tropos/witt.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tropos/errors.hpp"

namespace tropos::witt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void factor_into(Integer n, int sign, std::map<unsigned long, Rational>& out) {
  for (unsigned long p = 2; n > 1; ++p) {
    if (Integer(p) * p > n) {
      if (!n.fits_ulong_p()) throw PreconditionError("index has a prime factor beyond 64 bits");
      out[n.get_ui()] += sign;
      break;
    }
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      out[p] += sign;
    }
  }
}

}  // namespace

Index Index::rational(const Rational& x) {
  if (sgn(x) <= 0) throw PreconditionError("Teichmueller index must be positive");
  Index r;
  factor_into(x.get_num(), +1, r.primes_);
  factor_into(x.get_den(), -1, r.primes_);
  std::erase_if(r.primes_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Index Index::exp_2pi(const Rational& q) {
  Index r;
  r.two_pi_ = q;
  return r;
}

Index Index::operator*(const Index& o) const {
  Index r = *this;
  for (const auto& [p, e] : o.primes_) r.primes_[p] += e;
  std::erase_if(r.primes_, [](const auto& kv) { return kv.second == 0; });
  r.two_pi_ += o.two_pi_;
  return r;
}

Index Index::pow(const Rational& lambda) const {
  if (lambda == 0) return Index();
  Index r = *this;
  for (auto& [p, e] : r.primes_) e *= lambda;
  r.two_pi_ *= lambda;
  return r;
}

double Index::log() const {
  double s = kTwoPi * to_double(two_pi_);
  for (const auto& [p, e] : primes_) s += to_double(e) * std::log(static_cast<double>(p));
  return s;
}

double Index::value() const { return std::exp(log()); }

std::string Index::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (const auto& [p, e] : primes_) {
    os << (any ? "*" : "") << p << "^(" << e.get_str() << ")";
    any = true;
  }
  if (two_pi_ != 0) {
    os << (any ? "*" : "") << "e^(2pi*" << two_pi_.get_str() << ")";
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

std::strong_ordering Index::operator<=>(const Index& o) const {
  if (auto c = cmp(two_pi_, o.two_pi_); c != 0) return c <=> 0;
  auto a = primes_.begin(), b = o.primes_.begin();
  for (; a != primes_.end() && b != o.primes_.end(); ++a, ++b) {
    if (a->first != b->first) return a->first <=> b->first;
    if (auto c = cmp(a->second, b->second); c != 0) return c <=> 0;
  }
  if (a == primes_.end() && b == o.primes_.end()) return std::strong_ordering::equal;
  return a == primes_.end() ? std::strong_ordering::less : std::strong_ordering::greater;
}

void WittElement::add_term(const Index& r, Complex c) {
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(r, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

WittElement WittElement::operator+(const WittElement& o) const {
  WittElement r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, c);
  return r;
}

WittElement WittElement::operator-(const WittElement& o) const {
  WittElement r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
  return r;
}

WittElement WittElement::operator*(const WittElement& o) const {
  WittElement r;
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : o.terms_) r.add_term(k1 * k2, c1 * c2);
  return r;
}

WittElement WittElement::operator*(Complex s) const {
  WittElement r;
  for (const auto& [k, c] : terms_) r.add_term(k, c * s);
  return r;
}

bool WittElement::approx_equal(const WittElement& o, double tol) const {
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    // Keys present on one side only must carry a negligible coefficient.
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      if (std::abs(a->second) > tol) return false;
      ++a;
    } else if (a == terms_.end() || b->first < a->first) {
      if (std::abs(b->second) > tol) return false;
      ++b;
    } else {
      if (std::abs(a->second - b->second) > tol) return false;
      ++a;
      ++b;
    }
  }
  return true;
}

std::string WittElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : " + ") << "(" << c.real() << (c.imag() < 0 ? "-" : "+")
       << std::abs(c.imag()) << "i)[" << k.to_string() << "]";
    first = false;
  }
  return os.str();
}

WittElement teichmuller(const Rational& x) { return teichmuller(Index::rational(x)); }

WittElement teichmuller(const Index& r) {
  WittElement w;
  w.add_term(r, 1.0);
  return w;
}

WittElement theta(const Rational& lambda, const WittElement& w) {
  if (sgn(lambda) <= 0) throw PreconditionError("theta needs lambda > 0");
  WittElement r;
  for (const auto& [k, c] : w.terms()) r.add_term(k.pow(lambda), c);
  return r;
}

Complex chi(double lambda, const WittElement& w) {
  if (!(lambda > 0.0)) throw PreconditionError("chi needs lambda > 0");
  Complex s = 0.0;
  for (const auto& [k, c] : w.terms()) s += c * std::exp(lambda * k.log());
  return s;
}

WittElement q_function(double x, const Rational& y, const Rational& r) {
  if (sgn(y) <= 0) throw PreconditionError("q needs y > 0");
  WittElement w;
  w.add_term(Index::exp_2pi(Rational(-r * y)), std::polar(1.0, kTwoPi * to_double(r) * x));
  return w;
}

LeafGridFunction::LeafGridFunction(LeafGrid grid, std::vector<WittElement> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!(grid_.hx > 0.0) || sgn(grid_.hy) <= 0 || sgn(grid_.y0) <= 0)
    throw PreconditionError("leaf grid needs positive spacings and y0 > 0");
  if (values_.size() != grid_.nx * grid_.ny)
    throw PreconditionError("leaf grid value count does not match the grid");
  for (const auto& w : values_)
    for (const auto& [k, c] : w.terms())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw PreconditionError("leaf grid values must be finite");
}

LeafGridFunction LeafGridFunction::sample(
    const LeafGrid& grid, const std::function<WittElement(double, const Rational&)>& f) {
  std::vector<WittElement> values(grid.nx * grid.ny);
  for (std::size_t k = 0; k < grid.ny; ++k) {
    const Rational y = grid.y(k);
    for (std::size_t j = 0; j < grid.nx; ++j) values[k * grid.nx + j] = f(grid.x(j), y);
  }
  return LeafGridFunction(grid, std::move(values));
}

LeafGridFunction frobenius_lift(const Rational& mu, const LeafGridFunction& F) {
  if (sgn(mu) <= 0) throw PreconditionError("Frobenius needs mu > 0");
  LeafGrid g = F.grid();
  g.y0 *= mu;
  g.hy *= mu;
  std::vector<WittElement> values(F.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = theta(mu, F.values()[i]);
  return LeafGridFunction(g, std::move(values));
}

LeafGridFunction frobenius_lift(const Rational& mu, const LeafGridFunction& F,
                                const LeafGrid& target) {
  if (sgn(mu) <= 0) throw PreconditionError("Frobenius needs mu > 0");
  const LeafGrid& src = F.grid();
  std::vector<WittElement> values(target.nx * target.ny);
  for (std::size_t k = 0; k < target.ny; ++k) {
    // y/mu = y0 + m hy must hold for an integer 0 <= m < ny.
    const Rational m = (target.y(k) / mu - src.y0) / src.hy;
    if (!is_integer(m) || sgn(m) < 0 || Integer(m) >= static_cast<unsigned long>(src.ny))
      throw ResolutionError("y/mu is not a node of the source grid");
    const std::size_t row = Integer(m).get_ui();
    for (std::size_t j = 0; j < target.nx; ++j) {
      const double jx = (target.x(j) - src.x0) / src.hx;
      const double jr = std::round(jx);
      if (std::abs(jx - jr) > 1e-9 || jr < 0 || jr >= static_cast<double>(src.nx))
        throw ResolutionError("x is not a node of the source grid");
      values[k * target.nx + j] = theta(mu, F.at(static_cast<std::size_t>(jr), row));
    }
  }
  return LeafGridFunction(target, std::move(values));
}

double holomorphy_residual(const LeafGridFunction& F, double lambda) {
  const LeafGrid& g = F.grid();
  if (g.nx < 5 || g.ny < 5) throw PreconditionError("holomorphy residual needs a 5x5 grid");
  std::vector<Complex> v(F.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = chi(lambda, F.values()[i]);
  const double hy = to_double(g.hy);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < g.ny; ++k) {
    const double y = to_double(g.y(k));
    for (std::size_t j = 1; j + 1 < g.nx; ++j) {
      const Complex dx = (v[k * g.nx + j + 1] - v[k * g.nx + j - 1]) / (2.0 * g.hx);
      const Complex dy = (v[(k + 1) * g.nx + j] - v[(k - 1) * g.nx + j]) / (2.0 * hy);
      const Complex r = lambda * y * dx + Complex(0.0, 1.0) * y * dy;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

LeafGrid standard_grid(std::size_t n) {
  const auto nn = static_cast<unsigned long>(n);
  return LeafGrid{0.0, 1.0 / static_cast<double>(n), n, Rational(1, 20), Rational(1, 4 * nn), n};
}

}  // namespace tropos::witt
