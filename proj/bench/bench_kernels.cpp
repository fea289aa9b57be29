// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "hvpol/cascade.hpp"
#include "hvpol/epr.hpp"
#include "hvpol/fitting.hpp"
#include "hvpol/mc.hpp"
#include "hvpol/presets.hpp"
#include "hvpol/shrinkage.hpp"

using namespace hvpol;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_PairCurve(benchmark::State& s) {
  const auto p = presets::fig1_simple();
  const auto grid = degree_grid(0.0, 90.0, 1.0);
  for (auto _ : s) {
    auto c = curve([&](double a) { return pair_transmission_raw(p, a); }, grid, Normalization::unit_at_zero, mode(s));
    benchmark::DoNotOptimize(c.values.data());
  }
  label(s);
}

void BM_TripleCurve(benchmark::State& s) {
  const auto p = presets::fig1_simple();
  const auto grid = degree_grid(0.0, 90.0, 1.0);
  for (auto _ : s) {
    auto c = curve([&](double a) { return triple_transmission(p, a, 0.0); }, grid, Normalization::raw, mode(s));
    benchmark::DoNotOptimize(c.values.data());
  }
  label(s);
}

void BM_ShrinkageDistribution(benchmark::State& s) {
  const ShrinkageModel m(presets::fig2_profile(), presets::fig2_shrinkage());
  const auto grid = degree_grid(-89.0, 90.0, 5.0);
  for (auto _ : s) {
    auto d = m.output_distribution(grid, mode(s));
    benchmark::DoNotOptimize(d.densities.data());
  }
  label(s);
}

void BM_McPair(benchmark::State& s) {
  const auto p = presets::fig1_simple();
  McConfig cfg;
  cfg.samples = 1'000'000;
  for (auto _ : s) benchmark::DoNotOptimize(mc_pair(p, 0.5, cfg, mode(s)));
  s.SetItemsProcessed(s.iterations() * static_cast<int64_t>(cfg.samples));
  label(s);
}

void BM_McShrinkage(benchmark::State& s) {
  const ShrinkageModel m(presets::fig2_profile(), presets::fig2_shrinkage());
  const KernelSampler sampler(m);
  McConfig cfg;
  cfg.samples = 1'000'000;
  for (auto _ : s) benchmark::DoNotOptimize(mc_pair_shrinkage(m, sampler, 0.5, cfg, mode(s)));
  s.SetItemsProcessed(s.iterations() * static_cast<int64_t>(cfg.samples));
  label(s);
}

void BM_ChshScan(benchmark::State& s) {
  const auto e = hv_correlation(presets::fig1_simple());
  for (auto _ : s) benchmark::DoNotOptimize(chsh_scan(e, kPi / 12, mode(s)));
  label(s);
}

void BM_FitSimple(benchmark::State& s) {
  auto problem = FitProblem::with_defaults(ModelKind::simple);
  FitOptions o;
  o.starts = 4;
  o.max_iterations = 300;
  o.exec = mode(s);
  for (auto _ : s) benchmark::DoNotOptimize(minimize(problem, o));
  label(s);
}

}  // namespace

BENCHMARK(BM_PairCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TripleCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShrinkageDistribution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McPair)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McShrinkage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChshScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitSimple)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
