#include <benchmark/benchmark.h>

#include "qfcs/fcs.hpp"
#include "qfcs/presets.hpp"
#include "qfcs/states.hpp"

using namespace qfcs;

namespace {

Scenario chain_scenario(int n) {
  const ChainReservoir c = build_chain_reservoir(n, 0.3, 0.5, 7, 0.3);
  Operator hs = Operator::Zero(2, 2);
  hs(1, 1) = 1.0;
  Operator rho = Operator::Zero(2, 2);
  rho(1, 1) = 1.0;
  return Scenario(hs, c.hamiltonian, tensor(pauli_x(), c.edge), 0.2, 1.0, DensityMatrix(rho));
}

void BM_Eigensystem(benchmark::State& state) {
  RandomOperators rng(1);
  const Operator h = rng.hermitian(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigensystem(h));
}
BENCHMARK(BM_Eigensystem)->RangeMultiplier(2)->Range(4, 128);

void BM_ReservoirFcs(benchmark::State& state) {
  const Scenario s = chain_scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reservoir_fcs(s, 5.0));
}
BENCHMARK(BM_ReservoirFcs)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_StripFunctionEval(benchmark::State& state) {
  const StripFunction f(chain_scenario(static_cast<int>(state.range(0))), 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(f(Complex(0.5, 1.0)));
}
BENCHMARK(BM_StripFunctionEval)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
