// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "wqed/collective.hpp"
#include "wqed/correlations.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {

double dip(double gamma) { return closed_form_single(gamma, 1.0)[1].real(); }

void BM_SpectrumReport(benchmark::State& state) {
  const auto sys = validate(canonical_three_atom(1.0, 1.0));
  std::vector<double> grid;
  for (int i = 0; i < 199; ++i) grid.push_back(0.001 + (8.0 - 0.001) * i / 199.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_report(sys, grid));
}
BENCHMARK(BM_SpectrumReport)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto sys = validate(n_atom_mirror_config(N, 0.01, 1.0));
  const DriveSpec drive{1e-5, dip(0.01)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_driven(sys, drive));
}
BENCHMARK(BM_SteadyState)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AnalyticG2(benchmark::State& state) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const AnalyticG2 g(sys);
  double d = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g(d));
    d += 1e-6;
  }
}
BENCHMARK(BM_AnalyticG2);

void BM_RegressionCurve(benchmark::State& state) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto s = solve_driven(sys, {1e-5, dip(0.01)});
  std::vector<double> tau;
  for (int k = 0; k <= 8000; ++k) tau.push_back(0.5 * k);
  for (auto _ : state) benchmark::DoNotOptimize(g2_regression(s.liouvillian, s.steady, s.emission, tau));
}
BENCHMARK(BM_RegressionCurve)->Unit(benchmark::kMillisecond);

void BM_CollectiveModes(benchmark::State& state) {
  const auto sys = validate(n_atom_mirror_config(static_cast<int>(state.range(0)), 0.01, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(collective_modes(sys));
}
BENCHMARK(BM_CollectiveModes)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
