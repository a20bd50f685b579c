// Microbenchmarks for the hot paths: pure stepping, density stepping,
// trajectory sampling, cycle mixing averages, lattice entanglement.

#include <benchmark/benchmark.h>

#include "qwlab/channels.hpp"
#include "qwlab/density.hpp"
#include "qwlab/many_body.hpp"
#include "qwlab/observables.hpp"
#include "qwlab/walk.hpp"

namespace {

using namespace qwlab;

void BM_pure_line_evolve(benchmark::State& state) {
  const int steps = int(state.range(0));
  const StepPlan plan = StepPlan::plain(hadamard());
  for (auto _ : state) {
    WalkerState s = init_pure(InitialSpec::symmetric(), Topology::line(steps));
    evolve_in_place(s, plan, steps);
    benchmark::DoNotOptimize(s.c0.data());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_pure_line_evolve)->Arg(100)->Arg(400);

void BM_density_line_evolve(benchmark::State& state) {
  const int steps = int(state.range(0));
  const StepPlan plan = StepPlan::plain(hadamard());
  const KrausChannel noise = bit_flip(0.1);
  for (auto _ : state) {
    DensityState rho =
        init_density(InitialSpec::symmetric(), Topology::line(steps));
    evolve_density_in_place(rho, plan, &noise, steps);
    benchmark::DoNotOptimize(rho.m.data());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_density_line_evolve)->Arg(25)->Arg(50);

void BM_trajectory_sample(benchmark::State& state) {
  const int steps = 100;
  const WalkerState s0 =
      init_pure(InitialSpec::symmetric(), Topology::line(steps));
  const KrausChannel noise = bit_flip(0.1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_trajectory(s0, hadamard(), noise, steps, seed++).c0.data());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_trajectory_sample);

void BM_time_averaged_cycle(benchmark::State& state) {
  const long horizon = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        time_averaged_distribution(hadamard(), InitialSpec::symmetric(),
                                   Topology::cycle(101), horizon)
            .p.data());
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_time_averaged_cycle)->Arg(467);

void BM_lattice_entanglement(benchmark::State& state) {
  EnsembleSpec spec;
  spec.particles = mi_initial(40);
  spec.coin = hadamard();
  spec.steps = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(meyer_wallach_spatial(evolve_ensemble(spec)).value);
  }
}
BENCHMARK(BM_lattice_entanglement)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
