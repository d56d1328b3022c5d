// Serial reference vs OpenMP trial kernels on a sweep-sized workload.

#include <benchmark/benchmark.h>

#include "gaze/eval.hpp"
#include "gaze/kernels.hpp"
#include "gaze/rng.hpp"

namespace {

std::vector<gaze::TrialJob> make_jobs(int n) {
    std::vector<gaze::EngineConfig> configs;
    for (double th : {0.5, 1.0, 2.0, 3.0}) {
        gaze::EngineConfig c;
        c.dwell_threshold = th;
        configs.push_back(c);
    }
    const auto target = gaze::EngineConfig{}.target;
    std::vector<gaze::TrialJob> jobs;
    for (int k = 0; k < n; ++k) {
        const char* name = gaze::kScenarioNames[k % 5];
        jobs.push_back({gaze::random_variant(name, target, 1.0, gaze::derive_seed(1, {static_cast<std::uint64_t>(k)})),
                        configs});
    }
    return jobs;
}

void BM_TrialsSerial(benchmark::State& state) {
    const auto jobs = make_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gaze::evaluate_trials_serial(jobs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrialsParallel(benchmark::State& state) {
    const auto jobs = make_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gaze::evaluate_trials_parallel(jobs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["workers"] = gaze::parallel_workers();
}

void BM_Sweep(benchmark::State& state) {
    const auto exec = state.range(0) ? gaze::Execution::Parallel : gaze::Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(gaze::sweep_threshold(gaze::SweepSpec{}, exec));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
