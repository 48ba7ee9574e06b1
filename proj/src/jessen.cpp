#include "tropos/jessen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tropos/errors.hpp"
#include "tropos/kernels.hpp"

namespace tropos::jessen {

namespace {

bool same_frequency(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double parse_double(std::string_view s) {
  std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw PreconditionError("malformed number '" + buf + "'");
  }
  if (used != buf.size()) throw PreconditionError("malformed number '" + buf + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ExponentialSum::ExponentialSum(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.frequency < b.frequency; });
  for (const auto& t : terms) {
    if (!(t.frequency >= 0.0) || !std::isfinite(t.frequency))
      throw PreconditionError("frequencies must be finite and nonnegative");
    if (!terms_.empty() && same_frequency(terms_.back().frequency, t.frequency))
      terms_.back().coefficient += t.coefficient;
    else
      terms_.push_back(t);
  }
  std::erase_if(terms_, [](const Term& t) { return t.coefficient == Complex(0.0); });
  if (terms_.empty()) throw PreconditionError("exponential sum has no nonzero coefficient");
}

ExponentialSum ExponentialSum::parse(std::string_view text) {
  std::vector<Term> terms;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) throw PreconditionError("empty term in exponential sum");
    double freq = 0.0;
    if (const auto at = item.find('@'); at != std::string_view::npos) {
      std::string_view f = trim(item.substr(at + 1));
      item = trim(item.substr(0, at));
      if (f.starts_with("log")) {
        f.remove_prefix(3);
        if (f.starts_with("(") && f.ends_with(")")) f = f.substr(1, f.size() - 2);
        const double n = parse_double(f);
        if (!(n >= 1.0)) throw PreconditionError("log frequency needs an argument >= 1");
        freq = std::log(n);
      } else {
        freq = parse_double(f);
      }
    }
    Complex c;
    if (const auto colon = item.find(':'); colon != std::string_view::npos)
      c = {parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))};
    else
      c = parse_double(item);
    terms.push_back({freq, c});
  }
  return ExponentialSum(std::move(terms));
}

ExponentialSum ExponentialSum::dirichlet(const std::vector<Complex>& coefficients) {
  std::vector<Term> terms;
  for (std::size_t n = 1; n <= coefficients.size(); ++n)
    terms.push_back({std::log(static_cast<double>(n)), coefficients[n - 1]});
  return ExponentialSum(std::move(terms));
}

Complex ExponentialSum::operator()(Complex s) const {
  Complex v = 0.0;
  for (const auto& t : terms_) v += t.coefficient * std::exp(-t.frequency * s);
  return v;
}

double ExponentialSum::max_frequency() const { return terms_.back().frequency; }

std::string ExponentialSum::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ',';
    os << terms_[i].coefficient.real();
    if (terms_[i].coefficient.imag() != 0.0) os << ':' << terms_[i].coefficient.imag();
    os << '@' << terms_[i].frequency;
  }
  return os.str();
}

ExponentialSum operator*(const ExponentialSum& f, const ExponentialSum& g) {
  std::vector<Term> terms;
  for (const auto& a : f.terms())
    for (const auto& b : g.terms())
      terms.push_back({a.frequency + b.frequency, a.coefficient * b.coefficient});
  return ExponentialSum(std::move(terms));
}

double jessen_function(const ExponentialSum& f, double sigma, double T, std::size_t n_nodes) {
  if (!(T >= 100.0)) throw PreconditionError("jessen_function needs T >= 100");
  std::size_t n = n_nodes;
  if (n == 0)
    n = static_cast<std::size_t>(std::ceil(2.0 * T * 8.0 * std::max(1.0, f.max_frequency())));
  const kernels::ComplexFn eval = [&f](Complex s) { return f(s); };
  auto mean = [&](std::size_t nodes) -> double {
    for (double offset : {0.0, 0.25, -0.125}) {
      if (auto m = kernels::parallel::line_log_mean(eval, sigma, -T, T, nodes, offset)) return *m;
    }
    throw ResolutionError("zero on the line Re s = sigma");
  };
  double prev = mean(n);
  constexpr std::size_t kMaxNodes = std::size_t{1} << 26;
  while (n < kMaxNodes) {
    n *= 2;
    const double next = mean(n);
    if (std::abs(next - prev) <= 1e-9 * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw ResolutionError("log-mean did not converge; zero on or near the line");
}

namespace {

constexpr double kPi = std::numbers::pi;

// Argument change of f along the segment a -> b, splitting until every
// step is below pi/4.  Returns false if the path passes through a zero.
bool edge_argument(const ExponentialSum& f, Complex a, Complex b, double& total) {
  const double length = std::abs(b - a);
  const std::size_t n0 = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / 0.05)));
  struct Seg {
    Complex z0, z1;
    Complex f0, f1;
    int depth;
  };
  std::vector<Seg> stack;
  Complex prev_z = a;
  Complex prev_f = f(a);
  if (std::abs(prev_f) == 0.0) return false;
  for (std::size_t i = 1; i <= n0; ++i) {
    const Complex z = i == n0 ? b : a + (b - a) * (static_cast<double>(i) / n0);
    const Complex fz = f(z);
    if (std::abs(fz) == 0.0) return false;
    stack.push_back({prev_z, z, prev_f, fz, 0});
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      const double step = std::arg(s.f1 / s.f0);
      if (std::abs(step) <= kPi / 4) {
        total += step;
        continue;
      }
      if (s.depth > 40) return false;
      const Complex zm = 0.5 * (s.z0 + s.z1);
      const Complex fm = f(zm);
      if (std::abs(fm) == 0.0) return false;
      // Right half first so that the left half is processed next.
      stack.push_back({zm, s.z1, fm, s.f1, s.depth + 1});
      stack.push_back({s.z0, zm, s.f0, fm, s.depth + 1});
    }
    prev_z = z;
    prev_f = fz;
  }
  return true;
}

std::optional<std::int64_t> try_count(const ExponentialSum& f, const Rectangle& r) {
  const Complex c0(r.sigma_lo, r.t_lo), c1(r.sigma_hi, r.t_lo), c2(r.sigma_hi, r.t_hi),
      c3(r.sigma_lo, r.t_hi);
  double total = 0.0;
  if (!edge_argument(f, c0, c1, total) || !edge_argument(f, c1, c2, total) ||
      !edge_argument(f, c2, c3, total) || !edge_argument(f, c3, c0, total))
    return std::nullopt;
  const double turns = total / (2.0 * kPi);
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) > 0.1) return std::nullopt;
  return static_cast<std::int64_t>(nearest);
}

}  // namespace

std::int64_t zero_count(const ExponentialSum& f, const Rectangle& rect, std::uint64_t seed) {
  if (!(rect.sigma_lo < rect.sigma_hi) || !(rect.t_lo < rect.t_hi))
    throw PreconditionError("degenerate rectangle");
  if (auto n = try_count(f, rect)) return *n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  for (int attempt = 0; attempt < 5; ++attempt) {
    Rectangle r = rect;
    r.t_lo += jitter(rng);
    r.t_hi += jitter(rng);
    if (auto n = try_count(f, r)) return *n;
  }
  throw ResolutionError("argument principle failed; zero on or near the boundary");
}

std::int64_t zero_count(const ExponentialSum& f, double sigma_lo, double sigma_hi, double T,
                        std::uint64_t seed) {
  return zero_count(f, Rectangle{sigma_lo, sigma_hi, -T, T}, seed);
}

DensityReport zero_density_check(const ExponentialSum& f, double sigma_lo, double sigma_hi,
                                 double T, std::uint64_t seed) {
  if (!(sigma_lo < sigma_hi)) throw PreconditionError("need sigma_lo < sigma_hi");
  constexpr double h = 1e-3;
  DensityReport r{};
  r.zeros = zero_count(f, sigma_lo, sigma_hi, T, seed);
  r.count_density = static_cast<double>(r.zeros) / (2.0 * T);
  r.phi_slope_lo =
      (jessen_function(f, sigma_lo + h, T) - jessen_function(f, sigma_lo - h, T)) / (2 * h);
  r.phi_slope_hi =
      (jessen_function(f, sigma_hi + h, T) - jessen_function(f, sigma_hi - h, T)) / (2 * h);
  r.phi_density = (r.phi_slope_hi - r.phi_slope_lo) / (2.0 * kPi);
  r.absolute_gap = std::abs(r.count_density - r.phi_density);
  const double scale = std::max(std::abs(r.count_density), std::abs(r.phi_density));
  r.relative_gap = scale > 0.0 ? r.absolute_gap / scale : 0.0;
  return r;
}

}  // namespace tropos::jessen
