// Serial reference against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "sfwm/charsim.hpp"
#include "sfwm/contour.hpp"
#include "sfwm/jsa.hpp"

using namespace sfwm;

namespace {

FiberModel two_zdw_fiber() {
  FiberModel f;
  f.kind = FiberKind::TaylorSeries;
  f.length_m = 0.1;
  f.taylor_modes[ModeId::parse("HE11x")] = {2.4, {11.69, 4.9, -0.001, 0.0, 0.05}, {}};
  return f;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_ContourField(benchmark::State& state) {
  const auto f = two_zdw_fiber();
  const auto p = standard_process(1);
  const auto n = static_cast<std::size_t>(state.range(1));
  ContourOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(trace_contour(f, p, uniform_axis(2.1, 2.7, n), uniform_axis(-0.8, 0.8, n), opt));
}

void BM_JsaFull(benchmark::State& state) {
  const auto f = two_zdw_fiber();
  const auto p = standard_process(1);
  PumpSpec pump;
  pump.omega0 = 2.4;
  pump.sigma = 0.01;
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto axes = uniform_axes(2.8899, 1.9101, 0.04, 0.04, n, n);
  QuadratureOptions q;
  q.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(jsa_full(f, p, pump, pump, axes, q));
}

void BM_FourierTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  JsaGrid g;
  g.omega_s0 = g.omega_i0 = 2.4;
  g.nu_s = g.nu_i = uniform_axis(-0.1, 0.1, n);
  g.amp.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.nu_s[i], y = g.nu_i[j];
      g.at(i, j) = std::exp(-300.0 * (x + y) * (x + y) - 3000.0 * (x - y) * (x - y));
    }
  FtOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(sim_ft_spectroscopy(g, o));
}

}  // namespace

// range(0): 0 serial, 1 OpenMP; range(1): samples per axis
BENCHMARK(BM_ContourField)->ArgsProduct({{0, 1}, {128, 512}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JsaFull)->ArgsProduct({{0, 1}, {32, 64}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierTransform)->ArgsProduct({{0, 1}, {32, 64}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
