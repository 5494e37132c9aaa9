// Microbenchmarks of the propagator builders and their main ingredients,
// sized like the production runs (one m-block, jmax 16..32).

#include <benchmark/benchmark.h>

#include "rotorkick/basis.hpp"
#include "rotorkick/propagators.hpp"
#include "rotorkick/pulse.hpp"

using namespace rotorkick;

namespace {

const PulseSpec kPulse{20.0, 2.0};
constexpr double kEps = 0.5;

void BM_OperatorAssembly(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RotorOperators(b));
  }
}
BENCHMARK(BM_OperatorAssembly)->Arg(16)->Arg(32);

void BM_KickBuild(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  const RotorOperators ops(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kick_propagator(ops, 1.5));
  }
}
BENCHMARK(BM_KickBuild)->Arg(16)->Arg(32);

void BM_MagnusBuild(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  const RotorOperators ops(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(magnus_u(ops, kPulse, kEps, kTauF));
  }
}
BENCHMARK(BM_MagnusBuild)->Arg(16)->Arg(32);

// tau1 = 0 keeps the expansion generator diagonal; tau1 > 0 pays for a
// fresh eigendecomposition and per-element frequencies.
void BM_ImprovedBuildDiagonal(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  const RotorOperators ops(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(improved_u(ops, kPulse, kEps, kTauF, 0.0));
  }
}
BENCHMARK(BM_ImprovedBuildDiagonal)->Arg(16)->Arg(32);

void BM_ImprovedBuildGeneral(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  const RotorOperators ops(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(improved_u(ops, kPulse, kEps, kTauF, 0.3));
  }
}
BENCHMARK(BM_ImprovedBuildGeneral)->Arg(16)->Arg(32);

void BM_ReferencePulse(benchmark::State& state) {
  const RotorBasis b(0, 24);
  const RotorOperators ops(b);
  const StateVector psi0 = b.unit_state(0);
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference_state(ops, kPulse, kEps, dt, kTauF, psi0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReferencePulse)->Arg(1000)->Arg(10000);

void BM_WeightedIntegrals(benchmark::State& state) {
  // A fresh frequency every iteration keeps the cache out of the measurement.
  double omega = 0.0;
  for (auto _ : state) {
    omega += 1e-3;
    benchmark::DoNotOptimize(weighted_integrals(kPulse, omega));
  }
}
BENCHMARK(BM_WeightedIntegrals);

void BM_FOperatorMatrix(benchmark::State& state) {
  const RotorBasis b(0, static_cast<int>(state.range(0)));
  const RotorOperators ops(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_operator_matrix(ops, kPulse, kEps));
  }
}
BENCHMARK(BM_FOperatorMatrix)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
