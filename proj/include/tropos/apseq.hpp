#pragma once

// The digit-reversal almost-periodic sequence U on Z and empirical
// distribution functions of real sequences.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tropos/rational.hpp"

namespace tropos::apseq {

/// U(sum a_j p^j) = sum a_j p^{-j-1}, extended to negative integers by
/// U(x) = lim U(x + p^n).  A mixed-radix variant replaces p^j by the
/// partial products of a radix list (the last radix repeats forever).
class APSequence {
 public:
  /// Prime base p.
  explicit APSequence(unsigned long p);

  /// Mixed radix: digit j has radix radices[min(j, size-1)], i.e. the
  /// divisibility chain n_j = r_0 r_1 ... r_{j-1}.
  static APSequence mixed_radix(std::vector<unsigned long> radices);

  unsigned long base() const { return radices_.front(); }
  const std::vector<unsigned long>& radices() const { return radices_; }

  /// n_k, the k-th element of the divisibility chain (n_0 = 1).
  Integer chain(unsigned k) const;

  /// Exact value in [0, 1].  Negative x uses the smallest k with x + n_k > 0.
  Rational operator()(std::int64_t x) const;

  /// Negative-branch value computed with an explicit k (requires x + n_k > 0).
  Rational value_with_k(std::int64_t x, unsigned k) const;

 private:
  APSequence() = default;
  Rational reversed_digits(Integer y, unsigned digits) const;
  std::vector<unsigned long> radices_;
};

using RationalSequence = std::function<Rational(std::int64_t)>;

struct IntRange {
  std::int64_t lo;
  std::int64_t hi;  // inclusive
};

/// Checks |U(x + n p^m) - U(x)| <= p^{-m} exactly for every x, n in range.
bool epsilon_period_check(const RationalSequence& u, unsigned long p, unsigned m, IntRange window,
                          IntRange n_range);
bool epsilon_period_check(const APSequence& seq, unsigned m, IntRange window, IntRange n_range);

/// Empirical distribution function of equally weighted samples.
class DistributionFunction {
 public:
  /// Needs at least `min_samples` values (1000 by default).
  explicit DistributionFunction(std::vector<double> samples, std::size_t min_samples = 1000);

  /// Mass of samples <= sigma.
  double operator()(double sigma) const;
  /// Mass of samples < sigma.
  double below(double sigma) const;

  /// sup_sigma |F(sigma) - G(sigma)| for a continuous distribution G,
  /// evaluated on both sides of every jump.
  double sup_distance(const std::function<double(double)>& cdf) const;

  std::span<const double> samples() const { return samples_; }

 private:
  std::vector<double> samples_;
};

DistributionFunction empirical_distribution(std::vector<double> samples);

/// Values h(U(k)) for |k| <= T as doubles.
std::vector<double> sample_sequence(const APSequence& seq, std::int64_t T,
                                    const std::function<double(double)>& h);

struct PlateauResult {
  double plateau;     // empirical distribution inside the gap
  Rational rational;  // nearest j / p^K
  unsigned K;         // largest K with p^K <= T
};

/// Plateau of the distribution of h(U(k)), |k| <= T, inside a gap of the
/// range of h.  Throws PreconditionError if the gap meets h([0,1]) and
/// ResolutionError if the plateau is not within 1/sqrt(T) of j / p^K.
PlateauResult gap_plateau_check(const APSequence& seq, const std::function<double(double)>& h,
                                double gap_lo, double gap_hi, std::int64_t T);

}  // namespace tropos::apseq
