#pragma once

// Trial-evaluation kernels. Every Monte-Carlo workload in the harness reduces
// to "generate a trace, run the engine under one or more configs, score it".
// The jobs are independent, so the kernel comes in two builds:
//   evaluate_trials_serial   - plain loop, the reference
//   evaluate_trials_parallel - OpenMP parallel-for over jobs
// Results are stored by job index, so both return identical vectors.

#include <vector>

#include "gaze/core.hpp"
#include "gaze/sim.hpp"

namespace gaze {

struct TrialMetrics {
    int activations = 0;
    int true_activations = 0;
    int false_activations = 0;
    int misses = 0;
    int intentional_episodes = 0;
    std::vector<double> dwell_latencies;   // DwellStarted -> Activated, true activations
    std::vector<double> intent_latencies;  // intentional span start -> Activated
    double duration = 0.0;                 // trace length, seconds

    friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

struct TrialJob {
    Scenario scenario;
    std::vector<EngineConfig> configs;
};

enum class Execution { Serial, Parallel };

/// result[job][config]
using TrialResults = std::vector<std::vector<TrialMetrics>>;

TrialResults evaluate_trials_serial(const std::vector<TrialJob>& jobs);
TrialResults evaluate_trials_parallel(const std::vector<TrialJob>& jobs);
TrialResults evaluate_trials(const std::vector<TrialJob>& jobs, Execution exec = Execution::Parallel);

/// Worker threads the parallel kernel will use (1 without OpenMP).
int parallel_workers();

}  // namespace gaze
