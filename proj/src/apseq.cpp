#include "tropos/apseq.hpp"

#include <algorithm>
#include <cmath>

#include "tropos/errors.hpp"
#include "tropos/newton.hpp"

namespace tropos::apseq {

APSequence::APSequence(unsigned long p) : radices_{p} {
  if (!newton::is_prime(p)) throw PreconditionError("APSequence base must be prime");
}

APSequence APSequence::mixed_radix(std::vector<unsigned long> radices) {
  if (radices.empty()) throw PreconditionError("empty radix list");
  for (auto r : radices)
    if (r < 2) throw PreconditionError("radices must be at least 2");
  APSequence s;
  s.radices_ = std::move(radices);
  return s;
}

Integer APSequence::chain(unsigned k) const {
  Integer n = 1;
  for (unsigned j = 0; j < k; ++j) n *= radices_[std::min<std::size_t>(j, radices_.size() - 1)];
  return n;
}

Rational APSequence::reversed_digits(Integer y, unsigned digits) const {
  // Forward Horner: numerator = sum_j d_j * (n_D / n_{j+1}), denominator n_D.
  Integer num = 0;
  Integer den = 1;
  for (unsigned j = 0; j < digits; ++j) {
    const unsigned long r = radices_[std::min<std::size_t>(j, radices_.size() - 1)];
    const unsigned long d = mpz_fdiv_q_ui(y.get_mpz_t(), y.get_mpz_t(), r);
    num = num * r + d;
    den *= r;
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational APSequence::operator()(std::int64_t x) const {
  if (x >= 0) {
    unsigned digits = 0;
    const Integer y = static_cast<long>(x);
    for (Integer n = 1; n <= y; ++digits)
      n *= radices_[std::min<std::size_t>(digits, radices_.size() - 1)];
    return reversed_digits(y, digits);
  }
  unsigned k = 0;
  Integer n = 1;
  const Integer xx = static_cast<long>(x);
  while (xx + n <= 0) n *= radices_[std::min<std::size_t>(k++, radices_.size() - 1)];
  return value_with_k(x, k);
}

Rational APSequence::value_with_k(std::int64_t x, unsigned k) const {
  const Integer nk = chain(k);
  const Integer y = Integer(static_cast<long>(x)) + nk;
  if (x >= 0 || y <= 0) throw PreconditionError("value_with_k needs x < 0 < x + n_k");
  return Rational(reversed_digits(y, k) + Rational(1, nk));
}

bool epsilon_period_check(const RationalSequence& u, unsigned long p, unsigned m, IntRange window,
                          IntRange n_range) {
  std::int64_t pm = 1;
  for (unsigned j = 0; j < m; ++j) pm *= static_cast<std::int64_t>(p);
  const std::int64_t reach = std::max(std::abs(n_range.lo), std::abs(n_range.hi)) * pm;
  const std::int64_t lo = window.lo - reach;
  const std::int64_t hi = window.hi + reach;
  std::vector<Rational> cache(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t x = lo; x <= hi; ++x) cache[static_cast<std::size_t>(x - lo)] = u(x);
  const Rational bound = power(Rational(static_cast<long>(p)), -static_cast<long>(m));
  Rational diff;
  for (std::int64_t x = window.lo; x <= window.hi; ++x) {
    const Rational& ux = cache[static_cast<std::size_t>(x - lo)];
    for (std::int64_t n = n_range.lo; n <= n_range.hi; ++n) {
      diff = cache[static_cast<std::size_t>(x + n * pm - lo)] - ux;
      if (abs(diff) > bound) return false;
    }
  }
  return true;
}

bool epsilon_period_check(const APSequence& seq, unsigned m, IntRange window, IntRange n_range) {
  if (seq.radices().size() != 1) throw PreconditionError("epsilon_period_check needs a prime base");
  return epsilon_period_check([&seq](std::int64_t x) { return seq(x); }, seq.base(), m, window,
                              n_range);
}

DistributionFunction::DistributionFunction(std::vector<double> samples, std::size_t min_samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) throw PreconditionError("empty sample set");
  if (samples_.size() < min_samples)
    throw PreconditionError("too few samples for an empirical distribution");
  std::sort(samples_.begin(), samples_.end());
}

double DistributionFunction::operator()(double sigma) const {
  const auto count = std::upper_bound(samples_.begin(), samples_.end(), sigma) - samples_.begin();
  return static_cast<double>(count) / static_cast<double>(samples_.size());
}

double DistributionFunction::below(double sigma) const {
  const auto count = std::lower_bound(samples_.begin(), samples_.end(), sigma) - samples_.begin();
  return static_cast<double>(count) / static_cast<double>(samples_.size());
}

double DistributionFunction::sup_distance(const std::function<double(double)>& cdf) const {
  const double n = static_cast<double>(samples_.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < samples_.size()) {
    std::size_t j = i;
    while (j < samples_.size() && samples_[j] == samples_[i]) ++j;
    const double g = cdf(samples_[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i) / n - g),
                      std::abs(static_cast<double>(j) / n - g)});
    i = j;
  }
  return worst;
}

DistributionFunction empirical_distribution(std::vector<double> samples) {
  return DistributionFunction(std::move(samples));
}

std::vector<double> sample_sequence(const APSequence& seq, std::int64_t T,
                                    const std::function<double(double)>& h) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * T + 1));
  for (std::int64_t k = -T; k <= T; ++k) out.push_back(h(to_double(seq(k))));
  return out;
}

PlateauResult gap_plateau_check(const APSequence& seq, const std::function<double(double)>& h,
                                double gap_lo, double gap_hi, std::int64_t T) {
  if (!(gap_lo < gap_hi)) throw PreconditionError("empty gap");
  constexpr int kScan = 100000;
  for (int i = 0; i <= kScan; ++i) {
    const double v = h(static_cast<double>(i) / kScan);
    if (gap_lo < v && v < gap_hi) throw PreconditionError("gap intersects the range of h");
  }
  DistributionFunction dist(sample_sequence(seq, T, h));
  PlateauResult out;
  out.plateau = dist(0.5 * (gap_lo + gap_hi));
  out.K = 0;
  while (seq.chain(out.K + 1) <= static_cast<long>(T)) ++out.K;
  const Integer den = seq.chain(out.K);
  const double scale = den.get_d();
  out.rational = Rational(Integer(static_cast<long>(std::llround(out.plateau * scale))), den);
  out.rational.canonicalize();
  if (std::abs(out.plateau - to_double(out.rational)) > 1.0 / std::sqrt(static_cast<double>(T)))
    throw ResolutionError("plateau value is not close to a rational with denominator n_K");
  return out;
}

}  // namespace tropos::apseq
