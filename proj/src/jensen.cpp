#include "tropos/jensen.hpp"

#include <cmath>
#include <optional>
#include <numbers>
#include <sstream>

#include "tropos/errors.hpp"
#include "tropos/kernels.hpp"

namespace tropos::jensen {

namespace {

constexpr std::size_t kMaxNodes = std::size_t{1} << 24;
constexpr double kMeanAgreement = 1e-10;
constexpr double kMinArc = 1e-13;

std::string at(double x) {
  std::ostringstream os;
  os.precision(17);
  os << " (x = " << x << ")";
  return os.str();
}

void require_in_window(const AnnulusFunction& f, double x) {
  if (!f.x_window().contains(x)) throw PreconditionError("x outside the annulus window" + at(x));
}

}  // namespace

Interval<double> AnnulusFunction::x_window() const {
  Interval<double> w;
  if (std::isfinite(r_outer)) w.lo = -std::log(r_outer);
  if (r_inner > 0.0) w.hi = -std::log(r_inner);
  return w;
}

AnnulusFunction from_roots(std::vector<std::pair<Complex, int>> roots, Complex leading,
                           double r_inner, double r_outer) {
  AnnulusFunction f;
  f.r_inner = r_inner;
  f.r_outer = r_outer;
  f.known_zeros = roots;
  f.evaluate = [roots = std::move(roots), leading](Complex z) {
    Complex v = leading;
    for (const auto& [a, m] : roots)
      for (int k = 0; k < m; ++k) v *= z - a;
    return v;
  };
  return f;
}

AnnulusFunction from_coefficients(std::vector<Complex> coefficients, double r_inner,
                                  double r_outer) {
  AnnulusFunction f;
  f.r_inner = r_inner;
  f.r_outer = r_outer;
  f.evaluate = [c = std::move(coefficients)](Complex z) {
    Complex v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
  };
  return f;
}

AnnulusFunction exponential_sum(std::vector<std::pair<Complex, Complex>> terms, double r_inner,
                                double r_outer) {
  AnnulusFunction f;
  f.r_inner = r_inner;
  f.r_outer = r_outer;
  f.evaluate = [terms = std::move(terms)](Complex z) {
    Complex v = 0.0;
    for (const auto& [c, w] : terms) v += c * std::exp(w * z);
    return v;
  };
  return f;
}

AnnulusFunction product(const AnnulusFunction& f, const AnnulusFunction& g) {
  AnnulusFunction h;
  h.r_inner = std::max(f.r_inner, g.r_inner);
  h.r_outer = std::min(f.r_outer, g.r_outer);
  h.known_zeros = f.known_zeros;
  h.known_zeros.insert(h.known_zeros.end(), g.known_zeros.begin(), g.known_zeros.end());
  h.evaluate = [fe = f.evaluate, ge = g.evaluate](Complex z) { return fe(z) * ge(z); };
  return h;
}

AnnulusFunction compose_power(const AnnulusFunction& f, int n) {
  if (n < 1) throw PreconditionError("power must be positive");
  AnnulusFunction h;
  h.r_inner = std::pow(f.r_inner, 1.0 / n);
  h.r_outer = std::pow(f.r_outer, 1.0 / n);
  for (const auto& [a, m] : f.known_zeros) {
    const double r = std::pow(std::abs(a), 1.0 / n);
    const double phi = std::arg(a);
    for (int k = 0; k < n; ++k)
      h.known_zeros.emplace_back(std::polar(r, (phi + 2.0 * std::numbers::pi * k) / n), m);
  }
  h.evaluate = [fe = f.evaluate, n](Complex z) { return fe(std::pow(z, n)); };
  return h;
}

double tropicalize_c(const AnnulusFunction& f, double x, std::size_t n_nodes) {
  require_in_window(f, x);
  if (n_nodes < 64) throw PreconditionError("tropicalize_c needs at least 64 nodes");
  const double radius = std::exp(-x);
  double offset = 0.0;
  auto mean = kernels::parallel::circle_log_mean(f.evaluate, radius, n_nodes, offset);
  if (!mean) {
    offset = 0.5;
    mean = kernels::parallel::circle_log_mean(f.evaluate, radius, n_nodes, offset);
    if (!mean) throw ResolutionError("zero of f on the integration circle" + at(x));
  }
  // With a zero midway between nodes the error decays like c/n, so the
  // offset branch compares Richardson extrapolants 2 M(2n) - M(n) instead.
  std::optional<double> extrapolated;
  for (std::size_t n = 2 * n_nodes; n <= kMaxNodes; n *= 2) {
    auto finer = kernels::parallel::circle_log_mean(f.evaluate, radius, n, offset);
    if (!finer) throw ResolutionError("zero of f on the integration circle" + at(x));
    if (offset == 0.0) {
      const double diff = std::abs(*finer - *mean);
      mean = finer;
      if (diff <= kMeanAgreement * std::max(1.0, std::abs(*mean))) return *mean;
      continue;
    }
    const double e = 2.0 * *finer - *mean;
    mean = finer;
    if (extrapolated && std::abs(e - *extrapolated) <= kMeanAgreement * std::max(1.0, std::abs(e))) return e;
    extrapolated = e;
  }
  throw ResolutionError("circle mean did not converge; zero too close to the circle" + at(x));
}

namespace {

// A sampled step is trusted only if f turns by at most an eighth of a turn and
// |f| changes by at most this log-ratio.  An even-order zero closer to the
// circle than the node spacing turns f by a full turn within one step, which
// the principal argument cannot see, but it always shows up as a modulus dip.
constexpr double kMaxTurn = std::numbers::pi / 4;
constexpr double kMaxLogRatio = 0.5;

bool smooth_step(Complex a, Complex b) {
  return std::abs(std::arg(b / a)) <= kMaxTurn &&
         std::abs(std::log(std::abs(b) / std::abs(a))) <= kMaxLogRatio;
}

// Argument increment of f over the arc [ta, tb], halving the arc until both
// halves are smooth steps.
double arc_argument(const kernels::ComplexFn& f, double radius, double ta, Complex fa, double tb,
                    Complex fb, double x) {
  const double tm = 0.5 * (ta + tb);
  const Complex fm = f(std::polar(radius, tm));
  if (fm == 0.0) throw ResolutionError("zero of f on the winding circle" + at(x));
  if (smooth_step(fa, fm) && smooth_step(fm, fb)) return std::arg(fm / fa) + std::arg(fb / fm);
  if (tb - ta <= kMinArc * std::max(1.0, ta))
    throw ResolutionError("zero of f too close to the winding circle" + at(x));
  return arc_argument(f, radius, ta, fa, tm, fm, x) + arc_argument(f, radius, tm, fm, tb, fb, x);
}

}  // namespace

int winding_number(const AnnulusFunction& f, double x, std::size_t n_nodes) {
  require_in_window(f, x);
  if (n_nodes < 8) throw PreconditionError("winding_number needs at least 8 nodes");
  const double radius = std::exp(-x);
  auto trace = kernels::parallel::circle_argument(f.evaluate, radius, n_nodes);
  if (trace.hit_zero) throw ResolutionError("zero of f on the winding circle" + at(x));
  double total = trace.total;
  if (trace.max_step > kMaxTurn || trace.max_log_ratio > kMaxLogRatio) {
    // Some uniform step is too coarse: subdivide the arcs locally.
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n_nodes);
    total = 0.0;
    Complex f0 = f.evaluate(radius), fa = f0;
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const double ta = h * static_cast<double>(k), tb = h * static_cast<double>(k + 1);
      const Complex fb = k + 1 == n_nodes ? f0 : f.evaluate(std::polar(radius, tb));
      total += arc_argument(f.evaluate, radius, ta, fa, tb, fb, x);
      fa = fb;
    }
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1)
    throw ResolutionError("accumulated argument not near an integer; raise n_nodes" + at(x));
  return static_cast<int>(rounded);
}

namespace {

void bisect(const AnnulusFunction& f, double xl, int wl, double xr, int wr,
            const ProfileOptions& opt, std::vector<Atom<double>>& atoms) {
  if (xr - xl <= opt.breakpoint_width) {
    atoms.push_back({0.5 * (xl + xr), Rational(wl - wr)});
    return;
  }
  const double xm = 0.5 * (xl + xr);
  const int wm = winding_number(f, xm, opt.winding_nodes);
  if (wm != wl) bisect(f, xl, wl, xm, wm, opt, atoms);
  if (wm != wr) bisect(f, xm, wm, xr, wr, opt, atoms);
}

}  // namespace

PiecewiseAffine<double> tropical_profile(const AnnulusFunction& f, std::span<const double> grid,
                                         const ProfileOptions& options) {
  if (grid.size() < 8) throw PreconditionError("profile grid needs at least 8 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw PreconditionError("profile grid must be increasing");
  std::vector<int> windings(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    windings[i] = winding_number(f, grid[i], options.winding_nodes);

  std::vector<Atom<double>> atoms;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (windings[i] != windings[i + 1])
      bisect(f, grid[i], windings[i], grid[i + 1], windings[i + 1], options, atoms);
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom<double>& a, const Atom<double>& b) { return a.position < b.position; });

  std::vector<double> bps;
  std::vector<Rational> slopes{Rational(-windings.front())};
  for (const auto& a : atoms) {
    bps.push_back(a.position);
    slopes.push_back(Rational(slopes.back() + a.multiplicity));
  }
  const double x0 = grid.front();
  return PiecewiseAffine<double>::make({grid.front(), grid.back()}, std::move(bps),
                                       std::move(slopes), x0,
                                       tropicalize_c(f, x0, options.mean_nodes));
}

}  // namespace tropos::jensen
