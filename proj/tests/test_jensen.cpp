#include <doctest.h>

#include <cmath>
#include <random>

#include "tropos/errors.hpp"
#include "tropos/jensen.hpp"

using namespace tropos;
using namespace tropos::jensen;

namespace {

// Jensen's formula: tau(x) = log|lead| + sum_i m_i max(-x, log|a_i|).
double jensen_oracle(const std::vector<std::pair<Complex, int>>& roots, Complex lead, double x) {
  double v = std::log(std::abs(lead));
  for (const auto& [a, m] : roots) v += m * std::max(-x, std::log(std::abs(a)));
  return v;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("circle means") {
  CHECK(tropicalize_c(from_coefficients({Complex(-2.0, 0.0)}), 0.4) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  auto z4 = from_roots({{0.0, 4}});
  for (double x : {-1.5, 0.0, 2.25}) CHECK(tropicalize_c(z4, x) == doctest::Approx(-4 * x).epsilon(1e-12));
  std::vector<std::pair<Complex, int>> roots{{{0.3, 0.1}, 1}, {{-0.5, 0.0}, 2}, {{0.0, 2.0}, 1}};
  auto f = from_roots(roots, Complex(0.5, 1.0));
  for (double x : {-1.2, -0.4, 0.3, 1.1, 2.0})
    CHECK(std::abs(tropicalize_c(f, x) - jensen_oracle(roots, {0.5, 1.0}, x)) < 1e-9);
  CHECK_THROWS_AS(tropicalize_c(f, 0.0, 16), PreconditionError);
}

TEST_CASE("zero on the circle is retried with an offset") {
  // Zero at radius 1 exactly on the theta = 0 node.
  auto f = from_roots({{1.0, 1}});
  CHECK(std::abs(tropicalize_c(f, 0.0)) < 1e-6);
}

TEST_CASE("winding numbers") {
  auto z3 = from_roots({{0.0, 3}});
  CHECK(winding_number(z3, 1.0) == 3);
  CHECK(winding_number(from_coefficients({Complex(2.0)}), 0.0) == 0);
  auto f = from_roots({{0.5, 1}, {{0.0, -0.2}, 2}});
  CHECK(winding_number(f, std::log(1 / 0.6)) == 3);
  CHECK(winding_number(f, std::log(1 / 0.3)) == 2);
  CHECK(winding_number(f, std::log(1 / 0.1)) == 0);
  CHECK(winding_number(f, 0.0) == 3);
}

TEST_CASE("tropical profile") {
  SUBCASE("zeros and multiplicities") {
    std::vector<std::pair<Complex, int>> roots{{{0.5, 0.0}, 1}, {{0.0, 0.2}, 2}, {{-0.9, 0.1}, 1}};
    auto f = from_roots(roots);
    auto p = tropical_profile(f, grid(-1.0, 3.0, 41));
    auto d = laplacian(p);
    REQUIRE(d.size() == 3);
    CHECK(d.atoms()[0].position == doctest::Approx(-std::log(std::abs(Complex(-0.9, 0.1)))).epsilon(1e-5));
    CHECK(d.atoms()[1].position == doctest::Approx(-std::log(0.5)).epsilon(1e-5));
    CHECK(d.atoms()[2].position == doctest::Approx(-std::log(0.2)).epsilon(1e-5));
    CHECK(d.atoms()[2].multiplicity == 2);
    CHECK(p.is_convex());
    CHECK(p.has_integral_slopes());
  }
  SUBCASE("exp(z) is zero free") {
    auto p = tropical_profile(exponential_sum({{1.0, 1.0}}), grid(-2.0, 2.0, 17));
    CHECK(laplacian(p).empty());
  }
  CHECK_THROWS_AS(tropical_profile(from_roots({{0.5, 1}}), grid(0, 1, 4)), PreconditionError);
}

TEST_CASE("multiplicativity and power substitution") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mod(0.05, 0.95), ang(0.0, 2 * M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<Complex, int>> a, b;
    for (int i = 0; i < 3; ++i) a.push_back({std::polar(mod(rng), ang(rng)), 1});
    for (int i = 0; i < 2; ++i) b.push_back({std::polar(mod(rng), ang(rng)), 1});
    auto f = from_roots(a), g = from_roots(b);
    auto fg = product(f, g);
    for (double x : {-0.7, 0.35, 1.9})
      CHECK(std::abs(tropicalize_c(fg, x) - tropicalize_c(f, x) - tropicalize_c(g, x)) < 1e-9);
    for (int n : {2, 3}) {
      auto fn = compose_power(f, n);
      for (double x : {-0.4, 0.2, 0.9})
        CHECK(std::abs(tropicalize_c(fn, x) - tropicalize_c(f, n * x)) < 1e-9);
    }
  }
}
