#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "heins/circle_scan.hpp"
#include "heins/construction.hpp"
#include "heins/harmonic_measure.hpp"
#include "heins/rotation.hpp"
#include "heins/strip_map.hpp"

using namespace heins;

namespace {

const ConstructedFunction& constructed() {
  static const ConstructedFunction cf = ConstructedFunction::build(RotationFunction::power(1.0, 0.25));
  return cf;
}

void BM_ScanCircle(benchmark::State& state) {
  const auto pair = exp_pair();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_circle(pair, 100.0, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ScanCircle)->Arg(1024)->Arg(4096);

void BM_Lemma1Profile(benchmark::State& state) {
  const auto pair = exp_pair();
  for (auto _ : state) benchmark::DoNotOptimize(lemma1_profile(pair, 6.0, 120, 1024));
}
BENCHMARK(BM_Lemma1Profile)->Unit(benchmark::kMillisecond);

void BM_SolveStripMap(benchmark::State& state) {
  const auto profile = StripProfile::construction(RotationFunction::power(1.0, 0.25), std::log(10.0));
  const int mesh = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_strip_map(profile, 40.0, {mesh}));
}
BENCHMARK(BM_SolveStripMap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto rf = RotationFunction::power(1.0, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(classify(rf));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_ConstructBuild(benchmark::State& state) {
  const auto rf = RotationFunction::power(1.0, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(ConstructedFunction::build(rf));
}
BENCHMARK(BM_ConstructBuild)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_EvalF(benchmark::State& state) {
  const auto& cf = constructed();
  const Complex z = std::polar(static_cast<double>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(cf.eval_f(z));
}
BENCHMARK(BM_EvalF)->Arg(20)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_WosCap(benchmark::State& state) {
  const LogDomain dom(RotationFunction::power(1.0, 0.5, 1.0), 6.0);
  const WosOptions o{state.range(0), 1e-4, 1};
  for (auto _ : state) benchmark::DoNotOptimize(wos_measure(dom, Complex(1.5, 2.8), o, kRightEdge));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WosCap)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Geodesic(benchmark::State& state) {
  const LogDomain dom(RotationFunction::power(1.0, 0.5, 1.0), 6.0);
  const std::vector<Complex> sigma{Complex(1.0, dom.lower(1.0)), Complex(1.5, 2.8)};
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_dist(dom, sigma));
}
BENCHMARK(BM_Geodesic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
