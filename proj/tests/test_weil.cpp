#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "tropos/errors.hpp"
#include "tropos/weil.hpp"

using namespace tropos;
using namespace tropos::weil;

namespace {

std::filesystem::path data(const char* name) { return std::filesystem::path(TROPOS_TEST_DATA_DIR) / name; }

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

std::map<std::string, double> constants() {
  std::ifstream in(data("zeta_constants.txt"));
  std::map<std::string, double> out;
  std::string k;
  double v;
  while (in >> k >> v) out[k] = v;
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("von Mangoldt") {
  CHECK(mangoldt(8) == doctest::Approx(std::log(2.0)));
  CHECK(mangoldt(6) == 0.0);
  CHECK(mangoldt(1) == 0.0);
  CHECK(mangoldt(97) == doctest::Approx(std::log(97.0)));
  CHECK_THROWS_AS(mangoldt(0), PreconditionError);
  // psi(100) against prime-power enumeration.
  double psi = 0.0, oracle = 0.0;
  for (int n = 1; n <= 100; ++n) psi += mangoldt(n);
  for (int p = 2; p <= 100; ++p) {
    bool prime = true;
    for (int d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
    if (!prime) continue;
    for (int q = p; q <= 100; q *= p) oracle += std::log(static_cast<double>(p));
  }
  CHECK(psi == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("summation E") {
  auto b = TestFunction::bump(2.5, 3.5);
  CHECK(summation_E(b, 4.0) == 0.0);
  CHECK(summation_E(b, 1.0) == b(3.0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lo(0.5, 2.0), len(0.2, 2.0);
  for (int i = 0; i < 5; ++i) {
    const double a = lo(rng);
    auto f = TestFunction::bump(a, a + len(rng));
    double naive = 0.0;
    for (int n = 1; n < 1000; ++n) naive += f(n * 0.1);
    CHECK(std::abs(summation_E(f, 0.1) - naive) < 1e-14);
  }
  CHECK_THROWS_AS(summation_E(b, 0.0), PreconditionError);
}

TEST_CASE("Weil distribution") {
  CHECK(weil_c() == doctest::Approx(constants()["weil_c"]).epsilon(1e-15));
  CHECK(std::abs(weil_c() - 0.5 * (std::log(std::numbers::pi) + std::numbers::egamma)) < 1e-12);
  CHECK(weil_distribution(TestFunction::zero()) == 0.0);
  // Support without prime powers and away from 1: only the integral remains.
  auto h = TestFunction::bump(2.1, 2.9);
  const double oracle = gk([&h](double u) { return u * h(u) / (u * u - 1); }, 2.1, 2.9);
  CHECK(std::abs(weil_distribution(h) - oracle) < 1e-9);
  // Support around 1: h(1) = 1 after normalization, no integers >= 2.
  auto g0 = TestFunction::bump(0.5, 1.5);
  auto g = g0 * (1.0 / g0(1.0));
  const double h1 = g(1.0);
  CHECK(h1 == doctest::Approx(1.0));
  const double integral =
      gk([&g, h1](double u) { return (u * u * g(u) - h1) / ((u * u - 1) * u); }, 1.0, 1.5) +
      0.5 * h1 * std::log1p(-1.0 / (1.5 * 1.5));
  CHECK(std::abs(archimedean_term(g) - integral) < 1e-9);
  CHECK(std::abs(weil_distribution(g) - (integral + 0.860972775375466517)) < 1e-9);
  // Linearity.
  auto f1 = TestFunction::gaussian_bump(0.7, 3.2), f2 = TestFunction::bump(1.3, 5.5);
  CHECK(std::abs(weil_distribution(f1 * 2.0 + f2 * -0.5) -
                 (2 * weil_distribution(f1) - 0.5 * weil_distribution(f2))) < 1e-10);
}

TEST_CASE("involution") {
  auto g = TestFunction::sample([](double u) { return 5.0 * u / 2.0; }, 1.0, 3.0);
  CHECK(involution(g)(0.5) == doctest::Approx(10.0));
  auto f = TestFunction::gaussian_bump(0.8, 2.6);
  auto ff = involution(f);
  CHECK(ff.a() == doctest::Approx(1 / 2.6));
  CHECK(ff.b() == doctest::Approx(1 / 0.8));
  auto back = involution(ff);
  for (double u = 0.81; u < 2.6; u += 0.013) CHECK(std::abs(back(u) - f(u)) < 1e-10);
  // Grid-only path: nodes map exactly, values pick up e^{-t}.
  auto grid = TestFunction::from_grid(f.first(), f.values(), f.step(), f.a(), f.b());
  auto back_grid = involution(involution(grid));
  CHECK(back_grid.first() == grid.first());
  for (std::size_t i = 0; i < grid.values().size(); ++i)
    CHECK(std::abs(back_grid.values()[i] - grid.values()[i]) < 1e-15);
  auto sym0 = TestFunction::bump(0.5, 2.0);
  auto sym = TestFunction::sample([sym0](double u) { return sym0(u) / std::sqrt(u); }, 0.5, 2.0);
  auto fixed = involution(sym);
  for (double u = 0.55; u < 2.0; u += 0.05) CHECK(std::abs(fixed(u) - sym(u)) < 1e-14);
}

TEST_CASE("multiplicative convolution") {
  auto f = TestFunction::bump(1.0, 2.0);
  auto c = mult_convolve(f, f);
  CHECK(c.a() == 1.0);
  CHECK(c.b() == 4.0);
  auto g = TestFunction::gaussian_bump(0.7, 1.9);
  auto fg = mult_convolve(f, g), gf = mult_convolve(g, f);
  for (double u = 0.75; u < 3.7; u += 0.05) CHECK(std::abs(fg(u) - gf(u)) < 1e-10);
  // Direct quadrature oracle: int f(v) g(u/v) dv/v.
  for (double u : {1.0, 1.7, 2.4, 3.1}) {
    const double direct = gk([&](double v) { return f(v) * g(u / v) / v; }, 1.0, 2.0);
    CHECK(std::abs(fg(u) - direct) < 1e-10);
  }
  // Different grid spacings are reconciled.
  auto coarse = TestFunction::bump(1.0, 2.0, 1.0 / 256);
  auto mixed = mult_convolve(coarse, g);
  CHECK(mixed.step() == g.step());
  CHECK(std::abs(mixed(2.0) - fg(2.0)) < 1e-9);
}

TEST_CASE("quadratic form") {
  auto g = TestFunction::bump(0.7, 1.6);
  CHECK(quadratic_form(TestFunction::zero(), g) == 0.0);
  auto f1 = TestFunction::gaussian_bump(0.6, 1.4), f2 = TestFunction::bump(0.9, 2.2);
  CHECK(std::abs(quadratic_form(f1 + f2, g) - quadratic_form(f1, g) - quadratic_form(f2, g)) < 1e-9);
  auto a = make_admissible(TestFunction::gaussian_bump(0.7, 1.7));
  CHECK(std::abs(mellin_zero(a)) < 1e-12);
  CHECK(std::abs(mellin_one(a)) < 1e-12);
  CHECK(quadratic_form(a, a) < 1e-6);
}

TEST_CASE("zero tables") {
  CHECK_THROWS_AS(load_zeros(temp_file("tropos_empty.txt", "")), PreconditionError);
  CHECK(load_zeros(temp_file("tropos_two.txt", "14.13\n21.02\n")).size() == 2);
  try {
    load_zeros(temp_file("tropos_bad.txt", "14.13\n12.0\n"));
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_zeros(temp_file("tropos_nan.txt", "14.13\nabc\n")), PreconditionError);
  auto z = load_zeros(data("zeros10000.txt"));
  CHECK(z.size() == 10000);
  CHECK(std::abs(z.ordinates.front() - 14.134725141734693) < 1e-6);
  CHECK(std::abs(z.ordinates.front() - 14.1347) < 1e-3);
  auto small = load_zeros(data("zeros_sample100.txt"));
  CHECK(small.size() == 100);
  CHECK(small.ordinates == z.truncated(100).ordinates);
}

TEST_CASE("counting pair") {
  auto z = load_zeros(data("zeros1000.txt"));
  auto f = TestFunction::gaussian_bump(2.1, 2.9);
  auto terms = counting_terms(f, z);
  // Zero-free part is int (u + 1) f(u) d*u.
  const double oracle = gk([&f](double u) { return (u + 1) * f(u) / u; }, 2.1, 2.9);
  CHECK(std::abs(terms.linear + terms.constant - oracle) < 1e-9);
  CHECK(counting_pair(TestFunction::sample([](double) { return 0.0; }, 2.0, 3.0), z) == 0.0);
  CHECK_THROWS_AS(counting_pair(TestFunction::bump(0.9, 2.0), z), PreconditionError);
  // Tail of zeros 900..1000 is negligible for a smooth bump centred at e.
  auto e_bump = TestFunction::gaussian_bump(std::exp(1.0 - 0.2), std::exp(1.0 + 0.2));
  const double full = counting_pair(e_bump, z, 1000), partial = counting_pair(e_bump, z, 900);
  CHECK(std::abs(full - partial) < 1e-4 * std::abs(full));
  // Explicit formula on a prime-power-free support.
  const double prime_side = weil_distribution(f);
  CHECK(std::abs(prime_side - counting_pair(f, z)) < 0.01 * std::abs(prime_side));
}

TEST_CASE("zero sum at ordinates beyond the grid Nyquist frequency") {
  for (const auto& f : {TestFunction::gaussian_bump(1.5, 6.0), TestFunction::bump(2.0, 3.5)}) {
    for (double gamma : {14.134725, 800.0, 3000.0, 6000.0, 9500.0}) {
      ZeroTable z;
      z.ordinates = {gamma};
      z.orders = {1};
      // 2 int e^{t/2} f(e^t) cos(gamma t) dt, one GK panel per half period.
      const double lo = std::log(f.a()), hi = std::log(f.b());
      const int panels = static_cast<int>((hi - lo) * gamma / std::numbers::pi) + 1;
      double oracle = 0.0;
      for (int k = 0; k < panels; ++k) {
        const double a = lo + (hi - lo) * k / panels, b = lo + (hi - lo) * (k + 1) / panels;
        oracle += 2 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                          [&](double t) { return std::exp(t / 2) * f(std::exp(t)) * std::cos(gamma * t); }, a, b, 0);
      }
      CHECK(std::abs(counting_terms(f, z).zero_sum - oracle) < 1e-9);
    }
  }
}

TEST_CASE("omega at one") {
  auto c = constants();
  auto o = omega_terms();
  CHECK(o.half == 0.5);
  CHECK(o.gamma_half == doctest::Approx(0.5 * c["euler_gamma"]).epsilon(1e-15));
  CHECK(o.log4pi_half == doctest::Approx(0.5 * std::log(4 * std::numbers::pi)).epsilon(1e-15));
  CHECK(o.zeta_ratio == doctest::Approx(-c["zeta_prime_minus_one"] / c["zeta_minus_one"]).epsilon(1e-15));
  CHECK(std::abs(omega_at_one() - c["omega_at_one"]) < 1e-10);
  const double d = omega_at_one(kZetaPrimeMinusOne + 1e-8) - omega_at_one();
  CHECK(d == doctest::Approx(1.2e-7).epsilon(0.01));
}
