#include <benchmark/benchmark.h>

#include <numbers>

#include "mdisc/hull.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/simulator.hpp"

using namespace mdisc;

namespace {

ExperimentConfig trial_config(std::int64_t trials) {
  ExperimentConfig c;
  c.theta = std::numbers::pi / 6;
  c.transmittance = 0.6;
  c.trials = static_cast<std::uint64_t>(trials);
  c.seed = 1;
  c.imperfections = noise_preset("preset_paperlike");
  return c;
}

void BM_RunTrialsSerial(benchmark::State& state) {
  const ExperimentConfig c = trial_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RunTrialsParallel(benchmark::State& state) {
  const ExperimentConfig c = trial_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RandomProbesSerial(benchmark::State& state) {
  const PairAngle pa = PairAngle::from_overlap(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_random_probes_serial(pa, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RandomProbesParallel(benchmark::State& state) {
  const PairAngle pa = PairAngle::from_overlap(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_random_probes(pa, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CurveGridSerial(benchmark::State& state) {
  const PairAngle pa = PairAngle::from_overlap(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_curve_grid_serial(pa, 0.0, 0.6, state.range(0), SampleKind::CurveGrid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CurveGridParallel(benchmark::State& state) {
  const PairAngle pa = PairAngle::from_overlap(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_curve_grid(pa, 0.0, 0.6, state.range(0), SampleKind::CurveGrid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void oracle_bench(benchmark::State& state, bool parallel) {
  const MeasurementPair pair = measurement_pair(std::numbers::pi / 6);
  OracleOptions o;
  o.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_povm(pair, 0.3, o));
}

void BM_OracleSerial(benchmark::State& state) { oracle_bench(state, false); }
void BM_OracleParallel(benchmark::State& state) { oracle_bench(state, true); }

void brute_bench(benchmark::State& state, bool parallel) {
  const MeasurementPair pair = measurement_pair(std::numbers::pi / 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_single(pair, 0.3, static_cast<int>(state.range(0)), parallel));
  }
}

void BM_BruteForceSerial(benchmark::State& state) { brute_bench(state, false); }
void BM_BruteForceParallel(benchmark::State& state) { brute_bench(state, true); }

}  // namespace

BENCHMARK(BM_RunTrialsSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunTrialsParallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RandomProbesSerial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomProbesParallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CurveGridSerial)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveGridParallel)->Arg(1 << 14)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BruteForceSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
