#include <benchmark/benchmark.h>

#include "pencil/experiments.hpp"

using namespace pencil;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel, " + std::to_string(max_threads()) + " threads");
}

// One main-equation solve per grid node.
void BM_InverseGridNodes(benchmark::State& state) {
  const SpectralDataSet data = make_split_data(0.01);
  const auto bg = BackgroundProblem::zero();
  InverseOptions opt;
  opt.grid = Grid{static_cast<int>(state.range(1))};
  for (auto _ : state) {
    const RecoveredPotentials rec =
        exec_of(state) == Execution::Serial ? run_algorithm1_serial(data, bg, opt) : run_algorithm1(data, bg, opt);
    benchmark::DoNotOptimize(rec.q1.data());
  }
  label(state);
}
BENCHMARK(BM_InverseGridNodes)->ArgsProduct({{0, 1}, {200, 800}})->Unit(benchmark::kMillisecond);

// Independent Newton refinements for the tail indices.
void BM_EigenSearch(benchmark::State& state) {
  const PotentialPair p = run_algorithm1(make_split_data(0.01), BackgroundProblem::zero()).as_potentials();
  const Shooter sh(p);
  EigenSearchOptions opt;
  opt.execution = exec_of(state);
  const int n_max = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const SpectralDataSet ev = find_eigenvalues(sh, n_max, 0.0, opt);
    benchmark::DoNotOptimize(ev.entries().data());
  }
  label(state);
}
BENCHMARK(BM_EigenSearch)->ArgsProduct({{0, 1}, {10, 30}})->Unit(benchmark::kMillisecond);

// Rows of the delta sweep.
void BM_DeltaSweep(benchmark::State& state) {
  SplitExperimentConfig cfg;
  cfg.deltas = {0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002, 0.0001};
  cfg.execution = exec_of(state);
  for (auto _ : state) {
    const TableResult res = run_table(cfg);
    benchmark::DoNotOptimize(res.rows.data());
  }
  label(state);
}
BENCHMARK(BM_DeltaSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
