#pragma once

// The group ring W of R_+^* with complex coefficients.  Teichmueller
// indices are kept exact as prod p^{q_p} * e^{2 pi q_0} with rational q's,
// which is a faithful encoding because the log p and 2 pi are linearly
// independent over Q.

#include <compare>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tropos/rational.hpp"

namespace tropos::witt {

using Complex = std::complex<double>;

class Index {
 public:
  /// The index 1.
  Index() = default;

  /// A positive rational, factored into primes.
  static Index rational(const Rational& x);
  /// e^{2 pi q}.
  static Index exp_2pi(const Rational& q);

  Index operator*(const Index& o) const;
  /// r -> r^lambda.
  Index pow(const Rational& lambda) const;

  /// log r as a double.
  double log() const;
  double value() const;

  const std::map<unsigned long, Rational>& primes() const { return primes_; }
  const Rational& two_pi_exponent() const { return two_pi_; }

  std::string to_string() const;

  std::strong_ordering operator<=>(const Index& o) const;
  bool operator==(const Index& o) const = default;

 private:
  std::map<unsigned long, Rational> primes_;  // nonzero exponents only
  Rational two_pi_ = 0;
};

class WittElement {
 public:
  WittElement() = default;

  const std::map<Index, Complex>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Adds c [r]; cancelling terms are removed.
  void add_term(const Index& r, Complex c);

  WittElement operator+(const WittElement& o) const;
  WittElement operator-(const WittElement& o) const;
  WittElement operator*(const WittElement& o) const;
  WittElement operator*(Complex s) const;

  /// Same index keys and coefficients within tol.
  bool approx_equal(const WittElement& o, double tol) const;
  bool operator==(const WittElement& o) const { return terms_ == o.terms_; }

  std::string to_string() const;

 private:
  std::map<Index, Complex> terms_;
};

/// [x] for rational x > 0.
WittElement teichmuller(const Rational& x);
WittElement teichmuller(const Index& r);

/// theta_lambda([r]) = [r^lambda].
WittElement theta(const Rational& lambda, const WittElement& w);

/// chi_lambda(sum c [r]) = sum c r^lambda.
Complex chi(double lambda, const WittElement& w);

/// q^r at x + i y: [e^{-2 pi r y}] e^{2 pi i r x}.
WittElement q_function(double x, const Rational& y, const Rational& r = 1);

/// Grid x_j = x0 + j hx (j < nx), y_k = y0 + k hy (k < ny), y0 > 0.
struct LeafGrid {
  double x0;
  double hx;
  std::size_t nx;
  Rational y0;
  Rational hy;
  std::size_t ny;

  double x(std::size_t j) const { return x0 + static_cast<double>(j) * hx; }
  Rational y(std::size_t k) const { return Rational(y0 + k * hy); }
  bool operator==(const LeafGrid& o) const = default;
};

class LeafGridFunction {
 public:
  LeafGridFunction(LeafGrid grid, std::vector<WittElement> values);

  static LeafGridFunction sample(const LeafGrid& grid,
                                 const std::function<WittElement(double, const Rational&)>& f);

  const LeafGrid& grid() const { return grid_; }
  const WittElement& at(std::size_t j, std::size_t k) const { return values_[k * grid_.nx + j]; }
  const std::vector<WittElement>& values() const { return values_; }

 private:
  LeafGrid grid_;
  std::vector<WittElement> values_;  // row k holds the nodes with y = y_k
};

/// Fr_mu = theta_mu o R(1/mu), returned on the mu-scaled grid
/// (y0 mu, hy mu), where every y/mu is an exact input node.
LeafGridFunction frobenius_lift(const Rational& mu, const LeafGridFunction& F);

/// Fr_mu onto a prescribed grid; ResolutionError if some y/mu (or x) is
/// not a node of F.
LeafGridFunction frobenius_lift(const Rational& mu, const LeafGridFunction& F,
                                const LeafGrid& target);

/// sup over interior nodes of |(lambda X + i Y) chi_lambda(F)| with
/// X = y d/dx, Y = y d/dy as central differences.
double holomorphy_residual(const LeafGridFunction& F, double lambda);

/// Unit-periodic x grid with n nodes and y in [1/20, 1/20 + (n-1)/(4n)].
LeafGrid standard_grid(std::size_t n);

}  // namespace tropos::witt
