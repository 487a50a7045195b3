// Serial reference vs OpenMP kernels for the sampling loops.

#include <benchmark/benchmark.h>

#include "fibra/fixtures.hpp"
#include "fibra/numerics.hpp"
#include "fibra/sampling.hpp"

namespace {

using namespace fibra;

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::kParallel : Execution::kSerial; }

void BM_ConjugacyPointwise(benchmark::State& state) {
  const fixtures::Bundle& b = fixtures::bundle("string-n3");
  const NetworkMap& m = b.maps.at("phi");
  const VirtualVectorField& w = b.dynamics.at("linear-cycle");
  for (auto _ : state) benchmark::DoNotOptimize(verify_conjugacy_pointwise(m, w, 1000, 0, mode(state)));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ConjugacyPointwise)->Arg(0)->Arg(1);

void BM_EvaluateBatch(benchmark::State& state) {
  const NetworkPtr n = fixtures::ten();
  const GlobalField f = interconnect(fixtures::linear_dynamics(n));
  std::vector<double> states;
  for (int i = 0; i < 4096; ++i) {
    Rng r = stream(0, i);
    const auto x = sample_total_state(*n, r);
    states.insert(states.end(), x.begin(), x.end());
  }
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate_batch(states, mode(state)));
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_EvaluateBatch)->Arg(0)->Arg(1);

void BM_Invariance(benchmark::State& state) {
  const NetworkPtr n = fixtures::four();
  const VirtualVectorField w = fixtures::linear_dynamics(n);
  for (auto _ : state) benchmark::DoNotOptimize(check_invariance(w.at("4"), *n, "4", 1000, 0, mode(state)));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Invariance)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
