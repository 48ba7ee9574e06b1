#include "tropos/weil.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "tropos/errors.hpp"
#include "tropos/kernels.hpp"
#include "tropos/quadrature.hpp"

namespace tropos::weil {

namespace {

double log_bump(double t, double ta, double tb) {
  const double x = (2.0 * t - (ta + tb)) / (tb - ta);
  if (!(x > -1.0 && x < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

void check_support(double a, double b) {
  if (!(a > 0.0 && a < b && std::isfinite(b)))
    throw PreconditionError("test function support must be [a, b] with 0 < a < b < inf");
}

}  // namespace

TestFunction TestFunction::sample(std::function<double(double)> f, double a, double b,
                                  double step) {
  check_support(a, b);
  if (!(step > 0.0)) throw PreconditionError("grid step must be positive");
  TestFunction out;
  out.a_ = a;
  out.b_ = b;
  out.step_ = step;
  out.first_ = static_cast<std::int64_t>(std::floor(std::log(a) / step)) - 2;
  const auto last = static_cast<std::int64_t>(std::ceil(std::log(b) / step)) + 2;
  out.values_.resize(static_cast<std::size_t>(last - out.first_ + 1));
  for (std::size_t i = 0; i < out.values_.size(); ++i) {
    const double u = std::exp(static_cast<double>(out.first_ + static_cast<std::int64_t>(i)) * step);
    out.values_[i] = (u > a && u < b) ? f(u) : 0.0;
  }
  out.eval_ = std::move(f);
  return out;
}

TestFunction TestFunction::from_grid(std::int64_t first, std::vector<double> values, double step,
                                     double a, double b) {
  check_support(a, b);
  TestFunction out;
  out.a_ = a;
  out.b_ = b;
  out.step_ = step;
  out.first_ = first;
  out.values_ = std::move(values);
  return out;
}

TestFunction TestFunction::bump(double a, double b, double step) {
  check_support(a, b);
  const double ta = std::log(a), tb = std::log(b);
  return sample([ta, tb](double u) { return log_bump(std::log(u), ta, tb); }, a, b, step);
}

TestFunction TestFunction::gaussian_bump(double a, double b, double step) {
  check_support(a, b);
  const double ta = std::log(a), tb = std::log(b);
  const double c = 0.5 * (ta + tb), w = 0.25 * (tb - ta);
  return sample(
      [=](double u) {
        const double t = std::log(u);
        return std::exp(-(t - c) * (t - c) / (2 * w * w)) * log_bump(t, ta, tb);
      },
      a, b, step);
}

TestFunction TestFunction::zero(double step) {
  return sample([](double) { return 0.0; }, 0.5, 2.0, step);
}

double TestFunction::operator()(double u) const {
  if (!(u > a_ && u < b_)) return 0.0;
  return eval_ ? eval_(u) : interpolate(std::log(u));
}

double TestFunction::at_log(double t) const {
  if (!(t > std::log(a_) && t < std::log(b_))) return 0.0;
  return eval_ ? eval_(std::exp(t)) : interpolate(t);
}

double TestFunction::interpolate(double t) const {
  const double x = t / step_ - static_cast<double>(first_);
  const auto j = static_cast<std::int64_t>(std::floor(x));
  const double s = x - static_cast<double>(j);
  auto v = [&](std::int64_t k) {
    return (k < 0 || k >= static_cast<std::int64_t>(values_.size()))
               ? 0.0
               : values_[static_cast<std::size_t>(k)];
  };
  // Lagrange cubic through nodes j-1, j, j+1, j+2.
  const double w0 = -s * (s - 1) * (s - 2) / 6;
  const double w1 = (s + 1) * (s - 1) * (s - 2) / 2;
  const double w2 = -(s + 1) * s * (s - 2) / 2;
  const double w3 = (s + 1) * s * (s - 1) / 6;
  return w0 * v(j - 1) + w1 * v(j) + w2 * v(j + 1) + w3 * v(j + 2);
}

TestFunction TestFunction::resampled(double step) const {
  if (step == step_) return *this;
  if (eval_) return sample(eval_, a_, b_, step);
  TestFunction grid = *this;
  return sample([grid](double u) { return grid.interpolate(std::log(u)); }, a_, b_, step);
}

TestFunction TestFunction::operator+(const TestFunction& g) const {
  const double h = std::min(step_, g.step_);
  const TestFunction x = resampled(h), y = g.resampled(h);
  const double a = std::min(a_, g.a_), b = std::max(b_, g.b_);
  if (x.eval_ && y.eval_) {
    return sample([x, y](double u) { return x(u) + y(u); }, a, b, h);
  }
  const std::int64_t first = std::min(x.first_, y.first_);
  const std::int64_t last = std::max(x.first_ + static_cast<std::int64_t>(x.values_.size()),
                                     y.first_ + static_cast<std::int64_t>(y.values_.size()));
  std::vector<double> values(static_cast<std::size_t>(last - first), 0.0);
  for (std::size_t i = 0; i < x.values_.size(); ++i)
    values[static_cast<std::size_t>(x.first_ - first) + i] += x.values_[i];
  for (std::size_t i = 0; i < y.values_.size(); ++i)
    values[static_cast<std::size_t>(y.first_ - first) + i] += y.values_[i];
  return from_grid(first, std::move(values), h, a, b);
}

TestFunction TestFunction::operator*(double s) const {
  TestFunction out = *this;
  for (auto& v : out.values_) v *= s;
  if (eval_) out.eval_ = [f = eval_, s](double u) { return s * f(u); };
  return out;
}

double mangoldt(std::int64_t n) {
  if (n < 1) throw PreconditionError("mangoldt needs n >= 1");
  if (n == 1) return 0.0;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(n));
}

double summation_E(const TestFunction& f, double v) {
  if (!(v > 0.0)) throw PreconditionError("summation_E needs v > 0");
  const auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(f.a() / v)));
  const auto hi = static_cast<std::int64_t>(std::floor(f.b() / v));
  double sum = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) sum += f(static_cast<double>(n) * v);
  return sum;
}

double weil_c() { return 0.5 * (std::log(std::numbers::pi) + std::numbers::egamma); }

double archimedean_term(const TestFunction& h) {
  if (h.b() <= 1.0) return 0.0;
  const double h0 = h.at_log(0.0);
  const double lo = std::max(0.0, std::log(h.a()));
  const double hi = std::log(h.b());
  // In t = log u the measure d*u is dt and the integrand becomes
  // (e^{2t} H(t) - H(0)) / (e^{2t} - 1).
  auto integrand = [&h, h0](double t) {
    return (std::exp(2 * t) * h.at_log(t) - h0) / std::expm1(2 * t);
  };
  const double step = h.step();
  std::vector<double> cells;
  double left = lo;
  auto k = static_cast<std::int64_t>(std::floor(lo / step)) + 1;
  while (left < hi) {
    const double right = std::min(hi, static_cast<double>(k) * step);
    if (right > left) cells.push_back(quad::gauss_legendre8(integrand, left, right));
    left = right;
    ++k;
  }
  // Beyond b the integrand is -H(0)/(e^{2t}-1), integrating to this tail.
  const double tail = 0.5 * h0 * std::log1p(-1.0 / (h.b() * h.b()));
  return kernels::pairwise_sum(cells) + tail;
}

double weil_distribution(const TestFunction& h) {
  double primes = 0.0;
  const auto top = static_cast<std::int64_t>(std::floor(h.b()));
  for (std::int64_t n = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(h.a())));
       n <= top; ++n)
    primes += mangoldt(n) * h(static_cast<double>(n));
  return primes + archimedean_term(h) + weil_c() * h(1.0);
}

TestFunction involution(const TestFunction& g) {
  if (g.has_evaluator())
    return TestFunction::sample([g](double u) { return g(1.0 / u) / u; }, 1.0 / g.b(),
                                1.0 / g.a(), g.step());
  // Node i maps to node -i, picking up the factor e^{-t}.
  const auto& v = g.values();
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  const std::int64_t first = -(g.first() + n - 1);
  std::vector<double> out(v.size());
  for (std::int64_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(first + k) * g.step();
    out[static_cast<std::size_t>(k)] = std::exp(-t) * v[static_cast<std::size_t>(n - 1 - k)];
  }
  return TestFunction::from_grid(first, std::move(out), g.step(), 1.0 / g.b(), 1.0 / g.a());
}

TestFunction mult_convolve(const TestFunction& f, const TestFunction& g) {
  const double h = std::min(f.step(), g.step());
  const TestFunction x = f.resampled(h), y = g.resampled(h);
  // In t = log u the multiplicative convolution against d*v is the additive
  // convolution against dt; trapezoid weights are all h since the ends vanish.
  std::vector<double> c = kernels::parallel::convolve(x.values(), y.values(), h);
  return TestFunction::from_grid(x.first() + y.first(), std::move(c), h, x.a() * y.a(),
                                 x.b() * y.b());
}

double quadratic_form(const TestFunction& f, const TestFunction& g) {
  return weil_distribution(mult_convolve(f, involution(g)));
}

double mellin_zero(const TestFunction& f) {
  // int f d*u = int F(t) dt
  std::vector<double> terms(f.values().begin(), f.values().end());
  return f.step() * kernels::pairwise_sum(terms);
}

double mellin_one(const TestFunction& f) {
  // int f du = int F(t) e^t dt
  std::vector<double> terms(f.values().size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = f.values()[i] * std::exp(static_cast<double>(f.first() + static_cast<std::int64_t>(i)) * f.step());
  return f.step() * kernels::pairwise_sum(terms);
}

TestFunction make_admissible(const TestFunction& f) {
  const TestFunction b1 = TestFunction::bump(0.6, 1.0, f.step());
  const TestFunction b2 = TestFunction::bump(1.1, 1.8, f.step());
  const double m00 = mellin_zero(b1), m01 = mellin_zero(b2);
  const double m10 = mellin_one(b1), m11 = mellin_one(b2);
  const double r0 = mellin_zero(f), r1 = mellin_one(f);
  const double det = m00 * m11 - m01 * m10;
  const double alpha = (r0 * m11 - m01 * r1) / det;
  const double beta = (m00 * r1 - m10 * r0) / det;
  return f + b1 * (-alpha) + b2 * (-beta);
}

ZeroTable ZeroTable::truncated(std::size_t n) const {
  ZeroTable out = *this;
  if (n < out.ordinates.size()) {
    out.ordinates.resize(n);
    out.orders.resize(n);
  }
  return out;
}

ZeroTable load_zeros(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open zero table " + path.string());
  ZeroTable z;
  z.source = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    double v = 0.0;
    const char* first = line.data() + b;
    const char* last = line.data() + e + 1;
    auto [ptr, ec] = std::from_chars(first, last, v);
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (ec != std::errc() || ptr != last) throw PreconditionError(where + "not a number");
    if (!(v > 0.0)) throw PreconditionError(where + "ordinate must be positive");
    if (!z.ordinates.empty() && !(v > z.ordinates.back()))
      throw PreconditionError(where + "ordinates must be strictly ascending");
    z.ordinates.push_back(v);
  }
  if (z.ordinates.empty()) throw PreconditionError("zero table " + path.string() + " is empty");
  z.orders.assign(z.ordinates.size(), 1);
  return z;
}

CountingTerms counting_terms(const TestFunction& f, const ZeroTable& Z, std::size_t zeros) {
  if (!(f.a() > 1.0)) throw PreconditionError("counting_pair needs support inside (1, inf)");
  if (Z.ordinates.empty()) throw PreconditionError("empty zero table");
  const std::size_t n = zeros == 0 ? Z.size() : std::min(zeros, Z.size());
  CountingTerms out;
  out.constant = mellin_zero(f);
  std::vector<double> lin(f.values().size());
  for (std::size_t i = 0; i < lin.size(); ++i)
    lin[i] = f.values()[i] * std::exp(static_cast<double>(f.first() + static_cast<std::int64_t>(i)) * f.step());
  out.linear = f.step() * kernels::pairwise_sum(lin);
  // Each conjugate pair of simple zeros contributes
  // 2 int e^{t/2} F(t) cos(gamma t) dt.
  std::vector<double> gammas;
  gammas.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    for (int m = 0; m < Z.orders[k]; ++m) gammas.push_back(Z.ordinates[k]);
  // The trapezoid sum aliases once gamma * step passes pi; keep gamma * step <= 1.
  double h = f.step();
  const double gamma_max = *std::max_element(gammas.begin(), gammas.end());
  while (gamma_max * h > 1.0) h *= 0.5;
  const TestFunction g = f.resampled(h);
  const auto& v = g.values();
  std::vector<double> nodes(v.size()), half(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = static_cast<double>(g.first() + static_cast<std::int64_t>(i)) * h;
    nodes[i] = t;
    half[i] = h * v[i] * std::exp(0.5 * t);
  }
  out.zero_sum = kernels::parallel::cosine_sum(half, nodes, gammas);
  return out;
}

double counting_pair(const TestFunction& f, const ZeroTable& Z, std::size_t zeros) {
  return counting_terms(f, Z, zeros).total();
}

OmegaTerms omega_terms(double zeta_prime_minus_one) {
  constexpr double zeta_minus_one = -1.0 / 12.0;
  return {0.5, 0.5 * std::numbers::egamma, 0.5 * std::log(4.0 * std::numbers::pi),
          -zeta_prime_minus_one / zeta_minus_one};
}

double omega_at_one(double zeta_prime_minus_one) { return omega_terms(zeta_prime_minus_one).total(); }

}  // namespace tropos::weil
