// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tropos/kernels.hpp"

namespace k = tropos::kernels;

namespace {

const k::ComplexFn kPoly = [](k::Complex z) {
  return (z - 0.3) * (z + k::Complex(0.1, 0.5)) * (z * z - 0.2);
};

const k::ComplexFn kDirichlet = [](k::Complex s) {
  return 1.0 + std::exp(-std::log(2.0) * s) + std::exp(-std::log(3.0) * s);
};

template <class Fn>
void circle_mean(benchmark::State& state, Fn fn) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fn(kPoly, 0.9, n, 0.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void line_mean(benchmark::State& state, Fn fn) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fn(kDirichlet, 0.5, -1000.0, 1000.0, n, 0.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Fn>
void cosine(benchmark::State& state, Fn fn) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> w(1400), t(1400), g(n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    t[i] = 0.4 + 1e-3 * static_cast<double>(i);
    w[i] = std::exp(-t[i]);
  }
  for (std::size_t i = 0; i < n; ++i) g[i] = 14.0 + 1.3 * static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(fn(w, t, g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1400);
}

template <class Fn>
void convolve(benchmark::State& state, Fn fn) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::sin(0.01 * static_cast<double>(i));
    b[i] = std::cos(0.02 * static_cast<double>(i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fn(a, b, 1e-3));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(circle_mean, serial, k::serial::circle_log_mean)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(circle_mean, parallel, k::parallel::circle_log_mean)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(line_mean, serial, k::serial::line_log_mean)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(line_mean, parallel, k::parallel::line_log_mean)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(cosine, serial, k::serial::cosine_sum)->Range(100, 10000);
BENCHMARK_CAPTURE(cosine, parallel, k::parallel::cosine_sum)->Range(100, 10000);
BENCHMARK_CAPTURE(convolve, serial, k::serial::convolve)->Range(256, 4096);
BENCHMARK_CAPTURE(convolve, parallel, k::parallel::convolve)->Range(256, 4096);

BENCHMARK_MAIN();
