#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tropos/apseq.hpp"
#include "tropos/errors.hpp"
#include "tropos/jensen.hpp"
#include "tropos/jessen.hpp"
#include "tropos/json_io.hpp"
#include "tropos/kernels.hpp"
#include "tropos/lift.hpp"
#include "tropos/newton.hpp"
#include "tropos/pwa.hpp"
#include "tropos/weil.hpp"
#include "tropos/witt.hpp"

#ifndef TROPOS_DEFAULT_DATA_DIR
#define TROPOS_DEFAULT_DATA_DIR "data"
#endif

namespace tropos::cli {

using io::Json;

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string resolve_data_file(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  if (const char* dir = std::getenv("TROPOS_DATA_DIR"); dir && *dir) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p.string();
  }
  const fs::path p = fs::path(TROPOS_DEFAULT_DATA_DIR) / name;
  if (fs::exists(p)) return p.string();
  throw PreconditionError("data file not found: " + name);
}

namespace {

struct Globals {
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  int threads = 0;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

// Collects the run header: version, every option of the subcommand (given
// or defaulted) and digests of the input files.
class Meta {
 public:
  Meta(const CLI::App& app, const CLI::App& sub, const Globals& g) {
    meta_["tool"] = "tropos";
    meta_["version"] = TROPOS_VERSION;
    meta_["subcommand"] = sub.get_name();
    Json params;
    auto record = [&params](const CLI::App& a) {
      for (const CLI::Option* opt : a.get_options()) {
        if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        const auto& res = opt->results();
        if (opt->get_type_size() == 0 && opt->get_expected_min() == 0) {
          params[key] = opt->count() > 0;
        } else if (res.size() > 1) {
          params[key] = res;
        } else if (res.size() == 1) {
          params[key] = res.front();
        } else {
          params[key] = opt->get_default_str();
        }
      }
    };
    record(app);
    record(sub);
    params["threads"] = g.threads;
    meta_["parameters"] = params;
    meta_["inputs"] = Json::object();
  }

  void input(const std::string& path) { meta_["inputs"][path] = file_digest(path); }
  const Json& json() const { return meta_; }

 private:
  Json meta_;
};

class Sink {
 public:
  Sink(const Globals& g, std::ostream& fallback) : fallback_(fallback), path_(g.out) {}

  void write(const std::string& text) {
    if (path_.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + path_);
    f << text;
  }

  void json(const Meta& meta, Json body) {
    Json j;
    j["meta"] = meta.json();
    for (auto& [k, v] : body.items()) j[k] = v;
    write(j.dump(2) + "\n");
  }

  void csv(const Meta& meta, const std::string& header, const std::string& rows) {
    write("# " + meta.json().dump() + "\n" + header + "\n" + rows);
  }

 private:
  std::ostream& fallback_;
  std::string path_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------- selftests

class SelfTest {
 public:
  explicit SelfTest(std::ostream& out) : out_(out) {}

  void check(const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string note;
    try {
      ok = body();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out_ << (ok ? "ok   " : "FAIL ") << name << note << "\n";
    failures_ += ok ? 0 : 1;
  }

  template <class E>
  void throws(const std::string& name, const std::function<void()>& body) {
    check(name, [&] {
      try {
        body();
      } catch (const E&) {
        return true;
      }
      return false;
    });
  }

  int exit_code() const { return failures_ == 0 ? kExitOk : kExitSelftestFailed; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

using Q = Rational;
using PwaQ = PiecewiseAffine<Rational>;

int selftest_pwa(std::ostream& out) {
  SelfTest t(out);
  const auto line = Interval<Rational>::whole();
  t.check("affine slope 3 through origin, f(2) = 6",
          [&] { return PwaQ::affine(line, 3, Q(0), Q(0))(Q(2)) == 6; });
  t.check("value at a breakpoint is the common limit", [&] {
    auto f = PwaQ::make(line, {Q(1)}, {Q(0), Q(1)}, Q(0), Q(0));
    return f(Q(1)) == 0 && f(Q(2)) == 1;
  });
  t.check("affine function has empty laplacian",
          [&] { return laplacian(PwaQ::affine(line, 5, Q(0), Q(1))).empty(); });
  t.check("max(0, x - 2) has laplacian delta_2", [&] {
    auto d = laplacian(PwaQ::make(line, {Q(2)}, {Q(0), Q(1)}, Q(0), Q(0)));
    return d.size() == 1 && d.atoms()[0].position == 2 && d.atoms()[0].multiplicity == 1;
  });
  t.check("scale_argument by 1 is the identity", [&] {
    auto f = PwaQ::make(line, {Q(1), Q(3)}, {Q(-1), Q(0), Q(2)}, Q(0), Q(0));
    return scale_argument(f, 1) == f;
  });
  t.check("scale_argument by 2 moves zeros to half, multiplicity times 2", [&] {
    auto f = PwaQ::make(line, {Q(3)}, {Q(0), Q(2)}, Q(0), Q(0));
    auto d = laplacian(scale_argument(f, 2));
    return d.size() == 1 && d.atoms()[0].position == Q(3, 2) && d.atoms()[0].multiplicity == 4;
  });
  t.check("add(f, 0) = f", [&] {
    auto f = PwaQ::make(line, {Q(1)}, {Q(-1), Q(1)}, Q(0), Q(0));
    return add(f, PwaQ::affine(line, 0, Q(0), Q(0))) == f;
  });
  t.check("max(-x, 3) breaks only at -3", [&] {
    auto m = pointwise_max(PwaQ::affine(line, -1, Q(0), Q(0)), PwaQ::affine(line, 0, Q(0), Q(3)));
    return m.breakpoints() == std::vector<Q>{Q(-3)};
  });
  t.check("rr_solve of the empty divisor is 0", [&] {
    auto f = rr_solve(Divisor<Rational>{}, line);
    return f.breakpoints().empty() && f.slopes()[0] == 0 && f(Q(7)) == 0;
  });
  t.check("rr_solve(-delta_2) = max(0, x - 2), D + lap f = 0", [&] {
    Divisor<Rational> d({{Q(2), Q(-1)}});
    auto f = rr_solve(d, line);
    return f == PwaQ::make(line, {Q(2)}, {Q(0), Q(1)}, Q(0), Q(0)) && (d + laplacian(f)).empty();
  });
  return t.exit_code();
}

int selftest_newton(std::ostream& out) {
  SelfTest t(out);
  t.check("monomial 5 X^3 is affine with slope -3", [] {
    auto f = newton::tropicalize_na(newton::ValuedSeries::from_polynomial(2, {{3, Q(5)}}));
    return f.breakpoints().empty() && f.slopes()[0] == -3;
  });
  t.check("shifting all valuations by c shifts tau down by c", [] {
    auto a = newton::tropicalize_na(newton::ValuedSeries(3, {{0, Q(0)}, {1, Q(0)}, {2, Q(1)}}));
    auto b = newton::tropicalize_na(newton::ValuedSeries(3, {{0, Q(2)}, {1, Q(2)}, {2, Q(3)}}));
    for (int x = -3; x <= 3; ++x)
      if (b(Q(x)) != a(Q(x)) - 2) return false;
    return true;
  });
  t.check("X - a with v(a) = 2 has one root of valuation 2", [] {
    auto d = newton::root_valuations(newton::ValuedSeries::from_polynomial(5, {{0, Q(-25)}, {1, Q(1)}}));
    return d.size() == 1 && d.atoms()[0].position == 2 && d.atoms()[0].multiplicity == 1;
  });
  t.check("s * 1 = s", [] {
    auto s = newton::ValuedSeries::from_polynomial(2, {{0, Q(4)}, {1, Q(3)}, {2, Q(1, 2)}});
    auto one = newton::ValuedSeries::from_polynomial(2, {{0, Q(1)}});
    return newton::tropicalize_na(newton::series_product_valuations(s, one)) ==
           newton::tropicalize_na(s);
  });
  return t.exit_code();
}

int selftest_jensen(std::ostream& out) {
  SelfTest t(out);
  using jensen::Complex;
  const auto c = jensen::from_coefficients({Complex(3.0, 4.0)});
  t.check("constant 3+4i has tau = log 5",
          [&] { return std::abs(jensen::tropicalize_c(c, 0.3) - std::log(5.0)) < 1e-14; });
  const auto z3 = jensen::from_roots({{Complex(0.0), 3}});
  t.check("z^3 has tau(x) = -3x", [&] {
    return std::abs(jensen::tropicalize_c(z3, 0.7) + 2.1) < 1e-12 &&
           std::abs(jensen::tropicalize_c(z3, -1.3) - 3.9) < 1e-12;
  });
  t.check("z^3 winds 3 times", [&] {
    return jensen::winding_number(z3, -1.0) == 3 && jensen::winding_number(z3, 2.0) == 3;
  });
  t.check("constant winds 0 times", [&] { return jensen::winding_number(c, 0.5) == 0; });
  t.check("exp(z) profile is affine with no zeros", [] {
    auto e = jensen::exponential_sum({{Complex(1.0), Complex(1.0)}});
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(-2.0 + 0.25 * i);
    auto p = jensen::tropical_profile(e, grid);
    return p.breakpoints().empty() && laplacian(p).empty();
  });
  return t.exit_code();
}

int selftest_apseq(std::ostream& out) {
  SelfTest t(out);
  const apseq::APSequence u(2);
  t.check("U(0) = 0", [&] { return u(0) == 0; });
  t.check("m = 0 bound holds", [&] { return apseq::epsilon_period_check(u, 0, {-50, 50}, {-3, 3}); });
  t.check("mutated sequence violates the bound", [&] {
    auto bad = [&u](std::int64_t x) { return x == 7 ? Q(1) : u(x); };
    return !apseq::epsilon_period_check(bad, 2, 4, {-20, 20}, {-2, 2});
  });
  t.check("constant sequence gives a step function", [] {
    apseq::DistributionFunction F(std::vector<double>(1000, 0.25));
    return F(0.2) == 0.0 && F(0.25) == 1.0 && F(0.9) == 1.0;
  });
  t.check("constant h gives plateau 0 or 1", [&] {
    auto r = apseq::gap_plateau_check(u, [](double) { return 0.3; }, 0.5, 0.6, 1000);
    return r.plateau == 1.0 && r.rational == 1;
  });
  t.throws<PreconditionError>("identity h has no gap", [&] {
    apseq::gap_plateau_check(u, [](double x) { return x; }, 0.4, 0.5, 1000);
  });
  return t.exit_code();
}

int selftest_lift(std::ostream& out) {
  SelfTest t(out);
  const auto beta = lift::Density::polynomial({0.0, 6.0, -6.0}, 0.0, 1.0);
  t.check("Beta(2,2) median is 1/2", [&] { return std::abs(beta.quantile(0.5) - 0.5) < 1e-11; });
  const auto uni = lift::Density::polynomial({1.0}, 0.0, 1.0);
  t.check("uniform quantile is the identity", [&] {
    for (double u : {0.0, 0.1, 0.37, 0.9, 1.0})
      if (std::abs(uni.quantile(u) - u) > 1e-11) return false;
    return true;
  });
  t.check("equal densities cancel at every height", [&] {
    auto L = lift::build_lift({beta, beta}, 64, apseq::APSequence(2));
    for (std::int64_t k = -64; k <= 64; ++k)
      if (L.position(k, 1) != L.position(k, -1)) return false;
    return lift::pair_with_test(L, [](double x) { return x * x; }, 64) == 0.0;
  });
  t.check("psi = 1 pairs to 0", [] {
    auto L = lift::build_lift(lift::figure4_divisor(), 100, apseq::APSequence(2));
    return lift::pair_with_test(L, [](double) { return 1.0; }, 100) == 0.0;
  });
  t.check("K = 1000 gives 4002 signed points", [] {
    return lift::build_lift(lift::figure4_divisor(), 1000, apseq::APSequence(2)).points.size() == 4002;
  });
  return t.exit_code();
}

int selftest_jessen(std::ostream& out) {
  SelfTest t(out);
  t.check("f = 3 has phi = log 3", [] {
    return std::abs(jessen::jessen_function(jessen::ExponentialSum::parse("3"), 0.5, 100) -
                    std::log(3.0)) < 1e-12;
  });
  t.check("doubled factor doubles the count", [] {
    auto f = jessen::ExponentialSum::parse("1,-1@log2");
    return jessen::zero_count(f * f, -1, 1, 100) == 2 * jessen::zero_count(f, -1, 1, 100);
  });
  t.check("zero-free strip has both densities near 0", [] {
    auto r = jessen::zero_density_check(jessen::ExponentialSum::parse("1,0.5@log2"), 0.5, 2.0, 200);
    return r.zeros == 0 && std::abs(r.phi_density) < 1e-3;
  });
  return t.exit_code();
}

int selftest_weil(std::ostream& out) {
  SelfTest t(out);
  t.check("Lambda(8) = log 2", [] { return std::abs(weil::mangoldt(8) - std::log(2.0)) < 1e-15; });
  t.check("Lambda(6) = 0", [] { return weil::mangoldt(6) == 0.0; });
  const auto b = weil::TestFunction::bump(2.5, 3.5);
  t.check("E(f, v) = 0 for v > b", [&] { return weil::summation_E(b, 4.0) == 0.0; });
  t.check("E(bump on [2.5,3.5], 1) = f(3)", [&] { return weil::summation_E(b, 1.0) == b(3.0); });
  t.check("N(0) = 0", [] { return weil::weil_distribution(weil::TestFunction::zero()) == 0.0; });
  t.check("symmetric g is fixed by the involution", [] {
    auto g = weil::TestFunction::bump(0.5, 2.0);
    auto s = weil::TestFunction::sample([g](double u) { return g(u) / std::sqrt(u); }, 0.5, 2.0);
    auto r = weil::involution(s);
    for (double u : {0.6, 0.9, 1.0, 1.3, 1.9})
      if (std::abs(r(u) - s(u)) > 1e-14) return false;
    return true;
  });
  t.check("g(2) = 5 gives g~(1/2) = 10", [] {
    auto g = weil::TestFunction::sample([](double u) { return 5.0 * u / 2.0; }, 1.0, 3.0);
    return std::abs(weil::involution(g)(0.5) - 10.0) < 1e-13;
  });
  t.check("supports [1,2] * [1,2] = [1,4]", [] {
    auto f = weil::TestFunction::bump(1.0, 2.0);
    auto c = weil::mult_convolve(f, f);
    return c.a() == 1.0 && c.b() == 4.0;
  });
  t.check("f * delta-approximant ~ f", [] {
    auto f = weil::TestFunction::bump(1.5, 3.0);
    const double w = 0.01;
    auto d = weil::TestFunction::sample(
        [w](double u) {
          const double t = std::log(u) / w;
          return std::abs(t) < 1 ? std::exp(-1 / (1 - t * t)) : 0.0;
        },
        std::exp(-w), std::exp(w));
    auto c = weil::mult_convolve(f, d * (1.0 / weil::mellin_zero(d)));
    for (double u = 1.6; u < 2.9; u += 0.1)
      if (std::abs(c(u) - f(u)) > 2 * w) return false;
    return true;
  });
  t.check("s(0, g) = 0", [] {
    return weil::quadratic_form(weil::TestFunction::zero(), weil::TestFunction::bump(0.7, 1.6)) == 0.0;
  });
  t.throws<PreconditionError>("empty zero file is rejected", [] {
    const auto p = std::filesystem::temp_directory_path() / "tropos_selftest_empty.txt";
    std::ofstream(p).close();
    weil::load_zeros(p);
  });
  t.check("two-line zero file has size 2", [] {
    const auto p = std::filesystem::temp_directory_path() / "tropos_selftest_two.txt";
    std::ofstream(p) << "14.13\n21.02\n";
    return weil::load_zeros(p).size() == 2;
  });
  t.check("f = 0 pairs to 0 against zeros", [] {
    weil::ZeroTable z{{14.134725142}, {1}, "inline"};
    return weil::counting_pair(weil::TestFunction::sample([](double) { return 0.0; }, 2.0, 3.0), z) == 0.0;
  });
  t.check("omega(1) is the sum of its four terms", [] {
    auto o = weil::omega_terms();
    return o.half == 0.5 && std::abs(o.gamma_half - 0.2886078324507664) < 1e-15 &&
           std::abs(o.log4pi_half - 0.5 * std::log(4 * M_PI)) < 1e-15 &&
           std::abs(o.zeta_ratio - 12 * weil::kZetaPrimeMinusOne) < 1e-15 &&
           weil::omega_at_one() == o.total();
  });
  return t.exit_code();
}

int selftest_witt(std::ostream& out) {
  SelfTest t(out);
  using witt::teichmuller;
  t.check("[1] is the unit", [] {
    auto w = teichmuller(Q(3)) + teichmuller(Q(2, 5)) * 2.0;
    return teichmuller(Q(1)) * w == w;
  });
  t.check("[2][3] = [6]", [] { return teichmuller(Q(2)) * teichmuller(Q(3)) == teichmuller(Q(6)); });
  t.check("theta_1 is the identity", [] {
    auto w = teichmuller(Q(3)) + witt::q_function(0.2, Q(1, 3));
    return witt::theta(Q(1), w) == w;
  });
  t.check("theta_2([3]) = [9]", [] { return witt::theta(Q(2), teichmuller(Q(3))) == teichmuller(Q(9)); });
  t.check("chi_lambda([x]) = x^lambda", [] {
    return std::abs(witt::chi(1.7, teichmuller(Q(5))) - std::pow(5.0, 1.7)) < 1e-12;
  });
  t.check("(q^{1/2})^2 = q on keys", [] {
    auto h = witt::q_function(0.3, Q(1, 5), Q(1, 2));
    auto q = witt::q_function(0.3, Q(1, 5));
    return (h * h).approx_equal(q, 1e-15) && (h * h).terms().begin()->first == q.terms().begin()->first;
  });
  const auto grid = witt::standard_grid(16);
  const auto F = witt::LeafGridFunction::sample(
      grid, [](double x, const Q& y) { return witt::q_function(x, y); });
  t.check("Fr_1 is the identity", [&] {
    auto G = witt::frobenius_lift(Q(1), F);
    return G.grid() == F.grid() && G.values() == F.values();
  });
  t.check("constant function has zero residual", [&] {
    auto C = witt::LeafGridFunction::sample(grid, [](double, const Q&) { return teichmuller(Q(7)); });
    return witt::holomorphy_residual(C, 1.3) == 0.0;
  });
  return t.exit_code();
}

// --------------------------------------------------------------- commands

std::pair<double, double> parse_span(const std::string& s) {
  const auto colon = s.find(':', s.front() == '-' ? 1 : 0);
  if (colon == std::string::npos) throw PreconditionError("expected lo:hi, got '" + s + "'");
  return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

jensen::AnnulusFunction annulus_from_json(const Json& j) {
  const Json& roots = j.is_array() ? j : j.at("roots");
  std::vector<std::pair<jensen::Complex, int>> rs;
  for (const auto& r : roots) {
    if (r.is_number()) {
      rs.push_back({r.get<double>(), 1});
      continue;
    }
    const double re = r.at(0).get<double>();
    const double im = r.size() > 1 ? r.at(1).get<double>() : 0.0;
    const int m = r.size() > 2 ? r.at(2).get<int>() : 1;
    rs.push_back({{re, im}, m});
  }
  jensen::Complex lead = 1.0;
  if (j.is_object() && j.contains("leading")) {
    const auto& l = j.at("leading");
    lead = l.is_array() ? jensen::Complex(l.at(0).get<double>(), l.at(1).get<double>())
                        : jensen::Complex(l.get<double>());
  }
  return jensen::from_roots(std::move(rs), lead);
}

weil::TestFunction parse_test_function(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionError("test function must be kind:a,b");
  const std::string kind = text.substr(0, colon);
  const auto ab = parse_doubles(text.substr(colon + 1));
  if (ab.size() != 2) throw PreconditionError("test function needs a support a,b");
  if (kind == "bump") return weil::TestFunction::bump(ab[0], ab[1]);
  if (kind == "gauss") return weil::TestFunction::gaussian_bump(ab[0], ab[1]);
  throw PreconditionError("unknown test function kind '" + kind + "'");
}

std::function<double(double)> parse_psi(const std::string& text, std::string& label) {
  std::string s = text;
  if (s.starts_with("psi=")) s.erase(0, 4);
  label = s;
  if (!s.starts_with("poly:")) throw PreconditionError("--pair expects psi=poly:c0,c1,...");
  auto c = parse_doubles(s.substr(5));
  return [c](double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  };
}

lift::DensityDivisor density_preset(const std::string& name) {
  if (name == "fig4") return lift::figure4_divisor();
  if (name == "uniform") {
    auto u = lift::Density::polynomial({1.0}, 0.0, 1.0);
    return {u, u};
  }
  throw PreconditionError("unknown density preset '" + name + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tropos: tropical descent toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.format = "";
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "seed for jitter policies")->default_val(0);
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->default_val(0);

  bool selftest = false;
  auto add_selftest = [&selftest](CLI::App* s) {
    s->add_flag("--selftest", selftest, "run the built-in examples");
  };

  // pwa
  auto* pwa_cmd = app.add_subcommand("pwa", "piecewise-affine functions and divisors");
  std::string pwa_in, pwa_rr, pwa_domain = "-inf:inf";
  long pwa_scale = 1;
  pwa_cmd->add_option("--in", pwa_in, "function JSON");
  pwa_cmd->add_option("--rr", pwa_rr, "divisor JSON to solve D + lap f >= 0 for");
  pwa_cmd->add_option("--domain", pwa_domain, "domain lo:hi for --rr")->default_val("-inf:inf");
  pwa_cmd->add_option("--scale", pwa_scale, "replace f(x) by f(n x)")->default_val(1);
  add_selftest(pwa_cmd);

  // newton
  auto* newton_cmd = app.add_subcommand("newton", "non-archimedean tropicalization");
  std::string newton_in;
  newton_cmd->add_option("--in", newton_in, "series JSON");
  add_selftest(newton_cmd);

  // jensen
  auto* jensen_cmd = app.add_subcommand("jensen", "archimedean tropicalization");
  std::string jensen_roots;
  double xmin = -3.0, xmax = 3.0;
  int jensen_points = 121;
  jensen_cmd->add_option("--roots", jensen_roots, "roots JSON: [[re, im, mult], ...]");
  jensen_cmd->add_option("--xmin", xmin)->default_val(-3.0);
  jensen_cmd->add_option("--xmax", xmax)->default_val(3.0);
  jensen_cmd->add_option("--points", jensen_points, "grid points")->default_val(121);
  add_selftest(jensen_cmd);

  // apseq
  auto* apseq_cmd = app.add_subcommand("apseq", "digit-reversal sequence");
  unsigned long ap_p = 2;
  std::string ap_range = "-16:16", ap_check = "values", ap_radices;
  unsigned ap_m = 10;
  apseq_cmd->add_option("--p", ap_p, "prime base")->default_val(2);
  apseq_cmd->add_option("--radices", ap_radices, "mixed radix list r0,r1,... (overrides --p)");
  apseq_cmd->add_option("--range", ap_range, "k range lo:hi")->default_val("-16:16");
  apseq_cmd->add_option("--check", ap_check, "values | period | equidistribution")
      ->check(CLI::IsMember({"values", "period", "equidistribution"}))
      ->default_val("values");
  apseq_cmd->add_option("--m", ap_m, "largest m for --check period")->default_val(10);
  add_selftest(apseq_cmd);

  // lift
  auto* lift_cmd = app.add_subcommand("lift", "discrete lift of a signed density");
  std::string lift_density = "fig4";
  std::int64_t lift_K = 1000, lift_T = 0;
  unsigned long lift_p = 2;
  std::vector<std::string> lift_pairs;
  lift_cmd->add_option("--density", lift_density, "preset: fig4 | uniform")->default_val("fig4");
  lift_cmd->add_option("--K", lift_K, "heights |k| <= K")->default_val(1000);
  lift_cmd->add_option("--p", lift_p, "prime of the digit-reversal sequence")->default_val(2);
  lift_cmd->add_option("--pair", lift_pairs, "psi=poly:c0,c1,... (repeatable)");
  lift_cmd->add_option("--T", lift_T, "pairing cutoff (default K)")->default_val(0);
  add_selftest(lift_cmd);

  // jessen
  auto* jessen_cmd = app.add_subcommand("jessen", "Jessen functions and zero densities");
  std::string jessen_sum, jessen_strip = "-1:1";
  double jessen_T = 1000.0;
  jessen_cmd->add_option("--sum", jessen_sum, "terms c@freq, e.g. \"1,-1@log2\"");
  jessen_cmd->add_option("--strip", jessen_strip, "sigma range lo:hi")->default_val("-1:1");
  jessen_cmd->add_option("--T", jessen_T, "half height")->default_val(1000.0);
  add_selftest(jessen_cmd);

  // weil
  auto* weil_cmd = app.add_subcommand("weil", "explicit formula");
  std::string weil_zeros = "zeros1000.txt", weil_f = "bump:2.1,2.9", weil_check = "explicit";
  std::size_t weil_n = 0;
  weil_cmd->add_option("--zeros", weil_zeros, "zero table")->default_val("zeros1000.txt");
  weil_cmd->add_option("--f", weil_f, "test function bump:a,b or gauss:a,b")->default_val("bump:2.1,2.9");
  weil_cmd->add_option("--check", weil_check, "explicit | distribution | omega")
      ->check(CLI::IsMember({"explicit", "distribution", "omega"}))
      ->default_val("explicit");
  weil_cmd->add_option("--nzeros", weil_n, "zeros used (0 = all)")->default_val(0);
  add_selftest(weil_cmd);

  // witt
  auto* witt_cmd = app.add_subcommand("witt", "Witt coefficients and Frobenius");
  std::string witt_check = "frobenius", witt_mu = "2", witt_grid = "64x64",
              witt_lambdas = "0.5,1,2";
  witt_cmd->add_option("--check", witt_check, "frobenius | residual")
      ->check(CLI::IsMember({"frobenius", "residual"}))
      ->default_val("frobenius");
  witt_cmd->add_option("--mu", witt_mu, "rational mu")->default_val("2");
  witt_cmd->add_option("--grid", witt_grid, "NxN")->default_val("64x64");
  witt_cmd->add_option("--lambda", witt_lambdas, "comma separated lambdas")->default_val("0.5,1,2");
  add_selftest(witt_cmd);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tropos: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  kernels::set_threads(g.threads);
  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  try {
    if (selftest) {
      if (name == "pwa") return selftest_pwa(out);
      if (name == "newton") return selftest_newton(out);
      if (name == "jensen") return selftest_jensen(out);
      if (name == "apseq") return selftest_apseq(out);
      if (name == "lift") return selftest_lift(out);
      if (name == "jessen") return selftest_jessen(out);
      if (name == "weil") return selftest_weil(out);
      if (name == "witt") return selftest_witt(out);
    }

    Meta meta(app, *sub, g);
    Sink sink(g, out);
    auto format = [&](const char* dflt) { return g.format.empty() ? std::string(dflt) : g.format; };

    if (name == "pwa") {
      Json body;
      if (!pwa_rr.empty()) {
        meta.input(pwa_rr);
        const auto span = pwa_domain;
        const auto colon = span.find(':', span.front() == '-' ? 1 : 0);
        if (colon == std::string::npos) throw PreconditionError("--domain expects lo:hi");
        auto end = [](const std::string& s, bool lower) -> std::optional<Rational> {
          if (s == (lower ? "-inf" : "inf")) return std::nullopt;
          return parse_rational(s);
        };
        Interval<Rational> dom{end(span.substr(0, colon), true), end(span.substr(colon + 1), false)};
        const auto d = io::divisor_from_json(read_json_file(pwa_rr));
        const auto f = rr_solve(d, dom);
        const auto total = d + laplacian(f);
        body["solution"] = io::to_json(f);
        body["divisor_plus_laplacian"] = io::to_json(total);
        body["effective"] = total.empty() || total.is_effective();
        body["integral_slopes"] = f.has_integral_slopes();
      } else {
        if (pwa_in.empty()) throw PreconditionError("pwa needs --in or --rr");
        meta.input(pwa_in);
        auto f = io::pwa_from_json(read_json_file(pwa_in));
        if (pwa_scale != 1) f = scale_argument(f, pwa_scale);
        body["function"] = io::to_json(f);
        body["laplacian"] = io::to_json(laplacian(f));
        body["convex"] = f.is_convex();
        body["integral_slopes"] = f.has_integral_slopes();
      }
      sink.json(meta, body);
      return kExitOk;
    }

    if (name == "newton") {
      if (newton_in.empty()) throw PreconditionError("newton needs --in");
      meta.input(newton_in);
      const auto s = io::valued_series_from_json(read_json_file(newton_in));
      const auto tau = newton::tropicalize_na(s);
      Json body;
      body["tropicalization"] = io::to_json(tau);
      body["tropical_zeros"] = io::to_json(laplacian(tau));
      Json hull = Json::array();
      for (const auto& v : s.newton_polygon())
        hull.push_back(Json::array({v.exponent, to_string(v.valuation)}));
      body["newton_polygon"] = hull;
      if (s.valuations().begin()->first >= 0) body["root_valuations"] = io::to_json(newton::root_valuations(s));
      if (format("json") == "csv") {
        std::string rows;
        for (const auto& a : laplacian(tau).atoms()) rows += to_string(a.position) + "," + to_string(a.multiplicity) + "\n";
        sink.csv(meta, "position,multiplicity", rows);
      } else {
        sink.json(meta, body);
      }
      return kExitOk;
    }

    if (name == "jensen") {
      if (jensen_roots.empty()) throw PreconditionError("jensen needs --roots");
      if (jensen_points < 8 || !(xmin < xmax)) throw PreconditionError("need xmin < xmax and >= 8 points");
      meta.input(jensen_roots);
      const auto f = annulus_from_json(read_json_file(jensen_roots));
      std::vector<double> grid;
      for (int i = 0; i < jensen_points; ++i) grid.push_back(xmin + (xmax - xmin) * i / (jensen_points - 1));
      if (format("json") == "csv") {
        std::string rows;
        for (double x : grid) rows += fmt(x) + "," + fmt(jensen::tropicalize_c(f, x)) + "\n";
        sink.csv(meta, "x,tau", rows);
      } else {
        const auto p = jensen::tropical_profile(f, grid);
        sink.json(meta, Json{{"profile", io::to_json(p)}, {"zeros", io::to_json(laplacian(p))}});
      }
      return kExitOk;
    }

    if (name == "apseq") {
      const apseq::APSequence seq =
          ap_radices.empty() ? apseq::APSequence(ap_p) : [&] {
            std::vector<unsigned long> r;
            for (double d : parse_doubles(ap_radices)) r.push_back(static_cast<unsigned long>(d));
            return apseq::APSequence::mixed_radix(r);
          }();
      const auto [lo_d, hi_d] = parse_span(ap_range);
      const auto lo = static_cast<std::int64_t>(lo_d), hi = static_cast<std::int64_t>(hi_d);
      if (lo > hi) throw PreconditionError("empty range");
      if (ap_check == "period") {
        Json rows = Json::array();
        bool all = true;
        for (unsigned m = 0; m <= ap_m; ++m) {
          const bool ok = apseq::epsilon_period_check(seq, m, {lo, hi}, {-10, 10});
          all = all && ok;
          rows.push_back(Json{{"m", m}, {"holds", ok}});
        }
        sink.json(meta, Json{{"checks", rows}, {"all_hold", all}});
      } else if (ap_check == "equidistribution") {
        std::vector<double> samples;
        for (std::int64_t k = lo; k <= hi; ++k) samples.push_back(to_double(seq(k)));
        apseq::DistributionFunction F(std::move(samples));
        const double d = F.sup_distance([](double s) { return std::clamp(s, 0.0, 1.0); });
        sink.json(meta, Json{{"samples", hi - lo + 1}, {"sup_distance", d}});
      } else if (format("csv") == "json") {
        Json vals = Json::array();
        for (std::int64_t k = lo; k <= hi; ++k) vals.push_back(Json::array({k, to_string(seq(k))}));
        sink.json(meta, Json{{"values", vals}});
      } else {
        std::string rows;
        for (std::int64_t k = lo; k <= hi; ++k) {
          const Rational u = seq(k);
          rows += std::to_string(k) + "," + u.get_num().get_str() + "," + u.get_den().get_str() + "\n";
        }
        sink.csv(meta, "k,numerator,denominator", rows);
      }
      return kExitOk;
    }

    if (name == "lift") {
      const auto d = density_preset(lift_density);
      const auto L = lift::build_lift(d, lift_K, apseq::APSequence(lift_p));
      if (!lift_pairs.empty()) {
        const std::int64_t T = lift_T == 0 ? lift_K : lift_T;
        Json rows = Json::array();
        std::string csv;
        for (const auto& pair : lift_pairs) {
          std::string label;
          const auto psi = parse_psi(pair, label);
          const double v = lift::pair_with_test(L, psi, T);
          rows.push_back(Json{{"psi", label}, {"normalized", v}, {"unnormalized", v * L.mass}});
          csv += label + "," + fmt(v) + "," + fmt(v * L.mass) + "\n";
        }
        if (format("json") == "csv")
          sink.csv(meta, "psi,normalized,unnormalized", csv);
        else
          sink.json(meta, Json{{"T", T}, {"mass", L.mass},
                               {"convention", "normalized = (1/2T) sum [psi(pos+) - psi(pos-)], "
                                              "unnormalized = mass * normalized"},
                               {"pairings", rows}});
        return kExitOk;
      }
      std::string rows;
      rows.reserve(L.points.size() * 32);
      for (const auto& pt : L.points)
        rows += std::to_string(pt.height) + "," + (pt.sign > 0 ? "+1" : "-1") + "," + fmt(pt.position) + "\n";
      sink.csv(meta, "k,sign,position", rows);
      return kExitOk;
    }

    if (name == "jessen") {
      if (jessen_sum.empty()) throw PreconditionError("jessen needs --sum");
      const auto f = jessen::ExponentialSum::parse(jessen_sum);
      const auto [s1, s2] = parse_span(jessen_strip);
      const auto r = jessen::zero_density_check(f, s1, s2, jessen_T, g.seed);
      Json body{{"sum", f.to_string()},
                {"zeros", r.zeros},
                {"count_density", r.count_density},
                {"phi_slope_lo", r.phi_slope_lo},
                {"phi_slope_hi", r.phi_slope_hi},
                {"phi_density", r.phi_density},
                {"absolute_gap", r.absolute_gap},
                {"relative_gap", r.relative_gap}};
      if (format("json") == "csv")
        sink.csv(meta, "zeros,count_density,phi_density,absolute_gap,relative_gap",
                 std::to_string(r.zeros) + "," + fmt(r.count_density) + "," + fmt(r.phi_density) +
                     "," + fmt(r.absolute_gap) + "," + fmt(r.relative_gap) + "\n");
      else
        sink.json(meta, body);
      return kExitOk;
    }

    if (name == "weil") {
      if (weil_check == "omega") {
        const auto o = weil::omega_terms();
        sink.json(meta, Json{{"half", o.half}, {"gamma_half", o.gamma_half},
                             {"log4pi_half", o.log4pi_half}, {"zeta_ratio", o.zeta_ratio},
                             {"omega_at_one", o.total()}});
        return kExitOk;
      }
      const auto f = parse_test_function(weil_f);
      if (weil_check == "distribution") {
        const double n = weil::weil_distribution(f);
        sink.json(meta, Json{{"weil_distribution", n}, {"archimedean", weil::archimedean_term(f)}});
        return kExitOk;
      }
      const std::string path = resolve_data_file(weil_zeros);
      meta.input(path);
      const auto Z = weil::load_zeros(path);
      const std::size_t used = weil_n == 0 ? Z.size() : std::min(weil_n, Z.size());
      const double prime_side = weil::weil_distribution(f);
      const double zero_side = weil::counting_pair(f, Z, used);
      const double residual = std::abs(prime_side - zero_side);
      sink.json(meta, Json{{"prime_side", prime_side},
                           {"zero_side", zero_side},
                           {"residual", residual},
                           {"relative_residual", residual / std::abs(prime_side)},
                           {"zeros_used", used}});
      return kExitOk;
    }

    if (name == "witt") {
      const auto x = witt_grid.find('x');
      if (x == std::string::npos) throw PreconditionError("--grid expects NxN");
      const auto nx = std::stoul(witt_grid.substr(0, x)), ny = std::stoul(witt_grid.substr(x + 1));
      if (nx != ny) throw PreconditionError("only square grids are supported");
      const Rational mu = parse_rational(witt_mu);
      const auto grid = witt::standard_grid(nx);
      const auto lambdas = parse_doubles(witt_lambdas);
      std::string rows;
      if (witt_check == "frobenius") {
        std::string header = "r,lambda,residual,residual_frobenius,keys_exact";
        for (const Rational& r : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
          const auto F = witt::LeafGridFunction::sample(
              grid, [&r](double xx, const Rational& y) { return witt::q_function(xx, y, r); });
          const auto G = witt::frobenius_lift(mu, F);
          const auto Q = witt::LeafGridFunction::sample(
              G.grid(), [&r](double xx, const Rational& y) { return witt::q_function(xx, y, r); });
          bool exact = true;
          for (std::size_t i = 0; i < G.values().size(); ++i) {
            const auto& a = G.values()[i].terms();
            const auto& b = Q.values()[i].terms();
            exact = exact && a.size() == b.size() && a.begin()->first == b.begin()->first;
          }
          for (double lam : lambdas)
            rows += r.get_str() + "," + fmt(lam) + "," + fmt(witt::holomorphy_residual(F, lam)) + "," +
                    fmt(witt::holomorphy_residual(G, lam)) + "," + (exact ? "true" : "false") + "\n";
        }
        sink.csv(meta, header, rows);
      } else {
        const auto F = witt::LeafGridFunction::sample(
            grid, [](double xx, const Rational& y) { return witt::q_function(xx, y); });
        for (double lam : lambdas) rows += fmt(lam) + "," + fmt(witt::holomorphy_residual(F, lam)) + "\n";
        sink.csv(meta, "lambda,residual", rows);
      }
      return kExitOk;
    }
  } catch (const PreconditionError& e) {
    err << "tropos " << name << ": " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ResolutionError& e) {
    err << "tropos " << name << ": " << e.what() << "\n";
    return kExitResolution;
  } catch (const std::invalid_argument& e) {
    err << "tropos " << name << ": bad number (" << e.what() << ")\n";
    return kExitPrecondition;
  }
  err << "tropos: unknown subcommand\n";
  return kExitUsage;
}

}  // namespace tropos::cli
