#pragma once

// Piecewise-affine functions on a real interval and their divisors.
//
// A function is stored as (breakpoints, slopes, anchor): the slope list has
// one more entry than the breakpoint list and the anchor fixes the additive
// constant.  Values at breakpoints are integrated from the anchor, so the
// function is continuous by construction.  Slopes and multiplicities are
// always exact rationals; positions are `Coord`, either `Rational` (exact
// tropical calculus) or `double` (breakpoints located numerically).

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropos/errors.hpp"
#include "tropos/rational.hpp"

namespace tropos {

template <class Coord>
inline Coord from_rational(const Rational& q);

template <>
inline Rational from_rational<Rational>(const Rational& q) {
  return q;
}

template <>
inline double from_rational<double>(const Rational& q) {
  return q.get_d();
}

/// Open interval (lo, hi); an empty optional is an infinite end.
template <class Coord>
struct Interval {
  std::optional<Coord> lo;
  std::optional<Coord> hi;

  static Interval whole() { return {}; }

  bool contains(const Coord& x) const {
    return (!lo || *lo < x) && (!hi || x < *hi);
  }

  bool operator==(const Interval&) const = default;
};

/// A point strictly inside (lo, hi): the midpoint when both ends are finite,
/// otherwise one unit away from the finite end (or 0).
template <class Coord>
Coord interior_point(const std::optional<Coord>& lo, const std::optional<Coord>& hi) {
  if (lo && hi) return Coord((*lo + *hi) / 2);
  if (lo) return Coord(*lo + 1);
  if (hi) return Coord(*hi - 1);
  return Coord(0);
}

template <class Coord>
struct Atom {
  Coord position;
  Rational multiplicity;

  bool operator==(const Atom&) const = default;
};

/// Finite signed atomic measure sum_j n_j delta_{x_j}, positions strictly
/// increasing, no zero multiplicities.
template <class Coord>
class Divisor {
 public:
  Divisor() = default;

  explicit Divisor(std::vector<Atom<Coord>> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom<Coord>& a, const Atom<Coord>& b) { return a.position < b.position; });
    for (auto& atom : atoms) {
      if (!atoms_.empty() && atoms_.back().position == atom.position) {
        atoms_.back().multiplicity += atom.multiplicity;
        if (atoms_.back().multiplicity == 0) atoms_.pop_back();
      } else if (atom.multiplicity != 0) {
        atoms_.push_back(std::move(atom));
      }
    }
  }

  const std::vector<Atom<Coord>>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  Rational degree() const {
    Rational total = 0;
    for (const auto& a : atoms_) total += a.multiplicity;
    return total;
  }

  bool is_effective() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom<Coord>& a) { return a.multiplicity > 0; });
  }

  bool is_integral() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom<Coord>& a) { return is_integer(a.multiplicity); });
  }

  Rational multiplicity_at(const Coord& x) const {
    for (const auto& a : atoms_)
      if (a.position == x) return a.multiplicity;
    return 0;
  }

  Divisor operator+(const Divisor& other) const {
    std::vector<Atom<Coord>> all = atoms_;
    all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
    return Divisor(std::move(all));
  }

  Divisor scaled(const Rational& factor) const {
    std::vector<Atom<Coord>> all = atoms_;
    for (auto& a : all) a.multiplicity *= factor;
    return Divisor(std::move(all));
  }

  Divisor operator-(const Divisor& other) const { return *this + other.scaled(-1); }

  /// Atoms strictly inside `window`.
  Divisor restricted(const Interval<Coord>& window) const {
    std::vector<Atom<Coord>> kept;
    for (const auto& a : atoms_)
      if (window.contains(a.position)) kept.push_back(a);
    return Divisor(std::move(kept));
  }

  /// Image under x -> x / n.
  Divisor pushforward_divide(long n) const {
    std::vector<Atom<Coord>> moved = atoms_;
    for (auto& a : moved) a.position = Coord(a.position / n);
    return Divisor(std::move(moved));
  }

  bool operator==(const Divisor&) const = default;

 private:
  std::vector<Atom<Coord>> atoms_;
};

template <class Coord>
class PiecewiseAffine {
 public:
  /// Builds a function, dropping redundant breakpoints (equal adjacent
  /// slopes).  Throws PreconditionError on malformed data.
  static PiecewiseAffine make(Interval<Coord> domain, std::vector<Coord> breakpoints,
                              std::vector<Rational> slopes, Coord anchor_x, Coord anchor_value) {
    if (slopes.size() != breakpoints.size() + 1)
      throw PreconditionError("slope list must be one longer than breakpoint list");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!domain.contains(breakpoints[i]))
        throw PreconditionError("breakpoint outside the open domain");
      if (i > 0 && !(breakpoints[i - 1] < breakpoints[i]))
        throw PreconditionError("breakpoints must be strictly increasing");
    }
    if ((domain.lo && anchor_x < *domain.lo) || (domain.hi && *domain.hi < anchor_x))
      throw PreconditionError("anchor outside the domain");

    PiecewiseAffine f;
    f.domain_ = std::move(domain);
    f.slopes_.push_back(slopes[0]);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (slopes[i + 1] == f.slopes_.back()) continue;
      f.breakpoints_.push_back(breakpoints[i]);
      f.slopes_.push_back(slopes[i + 1]);
    }
    f.anchor_x_ = anchor_x;
    f.anchor_value_ = anchor_value;
    f.rebuild_values();
    return f;
  }

  static PiecewiseAffine affine(Interval<Coord> domain, Rational slope, Coord x0, Coord v0) {
    return make(std::move(domain), {}, {std::move(slope)}, std::move(x0), std::move(v0));
  }

  const Interval<Coord>& domain() const { return domain_; }
  const std::vector<Coord>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  std::pair<Coord, Coord> anchor() const { return {anchor_x_, anchor_value_}; }

  /// Value at x; x must lie in the open domain.
  Coord operator()(const Coord& x) const {
    if (!domain_.contains(x)) throw PreconditionError("evaluation point outside the domain");
    return value_unchecked(x);
  }

  /// f'(x-) and f'(x+).
  const Rational& slope_left(const Coord& x) const {
    auto r = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin();
    return slopes_[static_cast<std::size_t>(r)];
  }
  const Rational& slope_right(const Coord& x) const {
    auto r = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin();
    return slopes_[static_cast<std::size_t>(r)];
  }

  bool is_convex() const {
    for (std::size_t i = 1; i < slopes_.size(); ++i)
      if (slopes_[i] < slopes_[i - 1]) return false;
    return true;
  }

  bool has_integral_slopes() const {
    return std::all_of(slopes_.begin(), slopes_.end(), [](const Rational& s) { return is_integer(s); });
  }

  /// Same function on a sub-interval of the domain.
  PiecewiseAffine restricted(const Interval<Coord>& window) const {
    if ((domain_.lo && (!window.lo || *window.lo < *domain_.lo)) ||
        (domain_.hi && (!window.hi || *domain_.hi < *window.hi)))
      throw PreconditionError("restriction window exceeds the domain");
    std::vector<Coord> bps;
    std::vector<Rational> slopes;
    Coord sample = interior_point(window.lo, window.hi);
    slopes.push_back(window.lo ? slope_right(*window.lo) : slopes_.front());
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (!window.contains(breakpoints_[i])) continue;
      bps.push_back(breakpoints_[i]);
      slopes.push_back(slopes_[i + 1]);
    }
    return make(window, std::move(bps), std::move(slopes), sample, value_unchecked(sample));
  }

  bool operator==(const PiecewiseAffine& other) const {
    if (!(domain_ == other.domain_ && breakpoints_ == other.breakpoints_ &&
          slopes_ == other.slopes_))
      return false;
    return value_unchecked(anchor_x_) == other.value_unchecked(anchor_x_);
  }

  // Unchecked evaluation, also valid at finite domain ends by continuity.
  Coord value_unchecked(const Coord& x) const {
    if (breakpoints_.empty())
      return Coord(anchor_value_ + from_rational<Coord>(slopes_[0]) * (x - anchor_x_));
    auto r = static_cast<std::size_t>(
        std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
    if (r == 0)
      return Coord(values_[0] + from_rational<Coord>(slopes_[0]) * (x - breakpoints_[0]));
    return Coord(values_[r - 1] + from_rational<Coord>(slopes_[r]) * (x - breakpoints_[r - 1]));
  }

 private:
  PiecewiseAffine() = default;

  void rebuild_values() {
    values_.assign(breakpoints_.size(), Coord(0));
    if (breakpoints_.empty()) return;
    // Region containing the anchor, then integrate the slopes outwards.
    auto r = static_cast<std::size_t>(
        std::lower_bound(breakpoints_.begin(), breakpoints_.end(), anchor_x_) -
        breakpoints_.begin());
    if (r < breakpoints_.size())
      values_[r] = Coord(anchor_value_ +
                         from_rational<Coord>(slopes_[r]) * (breakpoints_[r] - anchor_x_));
    else
      values_[r - 1] = Coord(anchor_value_ + from_rational<Coord>(slopes_[r]) *
                                                 (breakpoints_[r - 1] - anchor_x_));
    const std::size_t start = r < breakpoints_.size() ? r : r - 1;
    for (std::size_t i = start + 1; i < breakpoints_.size(); ++i)
      values_[i] = Coord(values_[i - 1] +
                         from_rational<Coord>(slopes_[i]) * (breakpoints_[i] - breakpoints_[i - 1]));
    for (std::size_t i = start; i-- > 0;)
      values_[i] = Coord(values_[i + 1] -
                         from_rational<Coord>(slopes_[i + 1]) * (breakpoints_[i + 1] - breakpoints_[i]));
  }

  Interval<Coord> domain_;
  std::vector<Coord> breakpoints_;
  std::vector<Rational> slopes_;
  Coord anchor_x_{};
  Coord anchor_value_{};
  std::vector<Coord> values_;
};

/// Distributional second derivative: sum_j (s_{j+1} - s_j) delta_{x_j}.
template <class Coord>
Divisor<Coord> laplacian(const PiecewiseAffine<Coord>& f) {
  std::vector<Atom<Coord>> atoms;
  const auto& bps = f.breakpoints();
  const auto& s = f.slopes();
  for (std::size_t i = 0; i < bps.size(); ++i) atoms.push_back({bps[i], Rational(s[i + 1] - s[i])});
  return Divisor<Coord>(std::move(atoms));
}

/// x -> f(n x).
template <class Coord>
PiecewiseAffine<Coord> scale_argument(const PiecewiseAffine<Coord>& f, long n) {
  if (n < 1) throw PreconditionError("scale factor must be a positive integer");
  Interval<Coord> dom;
  if (f.domain().lo) dom.lo = Coord(*f.domain().lo / n);
  if (f.domain().hi) dom.hi = Coord(*f.domain().hi / n);
  std::vector<Coord> bps;
  for (const auto& b : f.breakpoints()) bps.push_back(Coord(b / n));
  std::vector<Rational> slopes;
  for (const auto& s : f.slopes()) slopes.push_back(Rational(s * n));
  auto [ax, av] = f.anchor();
  return PiecewiseAffine<Coord>::make(std::move(dom), std::move(bps), std::move(slopes),
                                      Coord(ax / n), av);
}

namespace detail {

template <class Coord>
std::vector<Coord> merged_points(std::vector<Coord> a, const std::vector<Coord>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Sample points, one strictly inside each piece cut out of `domain` by the
// sorted interior points `cuts`.
template <class Coord>
std::vector<Coord> piece_samples(const Interval<Coord>& domain, const std::vector<Coord>& cuts) {
  std::vector<Coord> out;
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    std::optional<Coord> lo = k == 0 ? domain.lo : std::optional<Coord>(cuts[k - 1]);
    std::optional<Coord> hi = k == cuts.size() ? domain.hi : std::optional<Coord>(cuts[k]);
    out.push_back(interior_point(lo, hi));
  }
  return out;
}

template <class Coord>
void require_same_domain(const PiecewiseAffine<Coord>& f, const PiecewiseAffine<Coord>& g) {
  if (!(f.domain() == g.domain())) throw PreconditionError("domain mismatch");
}

}  // namespace detail

/// Pointwise sum (tropical product).
template <class Coord>
PiecewiseAffine<Coord> add(const PiecewiseAffine<Coord>& f, const PiecewiseAffine<Coord>& g) {
  detail::require_same_domain(f, g);
  auto cuts = detail::merged_points(f.breakpoints(), g.breakpoints());
  auto samples = detail::piece_samples(f.domain(), cuts);
  std::vector<Rational> slopes;
  for (const auto& s : samples) slopes.push_back(Rational(f.slope_left(s) + g.slope_left(s)));
  const Coord x0 = samples.front();
  return PiecewiseAffine<Coord>::make(f.domain(), std::move(cuts), std::move(slopes), x0,
                                      Coord(f(x0) + g(x0)));
}

/// Pointwise maximum (tropical sum).  Crossing points are exact for
/// rational data.
template <class Coord>
PiecewiseAffine<Coord> pointwise_max(const PiecewiseAffine<Coord>& f,
                                     const PiecewiseAffine<Coord>& g) {
  detail::require_same_domain(f, g);
  auto cuts = detail::merged_points(f.breakpoints(), g.breakpoints());
  std::vector<Coord> crossings;
  {
    auto samples = detail::piece_samples(f.domain(), cuts);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const Coord& s = samples[k];
      const Rational ds = f.slope_left(s) - g.slope_left(s);
      if (ds == 0) continue;
      const Coord x = Coord(s - (f(s) - g(s)) / from_rational<Coord>(ds));
      std::optional<Coord> lo = k == 0 ? f.domain().lo : std::optional<Coord>(cuts[k - 1]);
      std::optional<Coord> hi = k == cuts.size() ? f.domain().hi : std::optional<Coord>(cuts[k]);
      if (Interval<Coord>{lo, hi}.contains(x)) crossings.push_back(x);
    }
  }
  cuts = detail::merged_points(std::move(cuts), crossings);
  auto samples = detail::piece_samples(f.domain(), cuts);
  std::vector<Rational> slopes;
  for (const auto& s : samples) slopes.push_back(f(s) >= g(s) ? f.slope_left(s) : g.slope_left(s));
  const Coord x0 = samples.front();
  const Coord v0 = f(x0) >= g(x0) ? f(x0) : g(x0);
  return PiecewiseAffine<Coord>::make(f.domain(), std::move(cuts), std::move(slopes), x0, v0);
}

/// Solution of the characteristic-one Riemann-Roch problem D + Delta(f) >= 0
/// with integral slopes: f = sum over poles of (-n_j) max(0, x - x_j).
template <class Coord>
PiecewiseAffine<Coord> rr_solve(const Divisor<Coord>& divisor, const Interval<Coord>& domain) {
  if (!divisor.is_integral()) throw PreconditionError("rr_solve needs integral multiplicities");
  std::vector<Coord> bps;
  std::vector<Rational> slopes{Rational(0)};
  for (const auto& a : divisor.atoms()) {
    if (!domain.contains(a.position)) throw PreconditionError("divisor atom outside the domain");
    if (a.multiplicity >= 0) continue;
    bps.push_back(a.position);
    slopes.push_back(Rational(slopes.back() - a.multiplicity));
  }
  if (bps.empty())
    return PiecewiseAffine<Coord>::affine(domain, 0, interior_point(domain.lo, domain.hi), Coord(0));
  const Coord x0 = bps.front();
  return PiecewiseAffine<Coord>::make(domain, std::move(bps), std::move(slopes), x0, Coord(0));
}

extern template class Divisor<Rational>;
extern template class Divisor<double>;
extern template class PiecewiseAffine<Rational>;
extern template class PiecewiseAffine<double>;

}  // namespace tropos
