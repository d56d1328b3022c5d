#pragma once

// Quantifies the technique: false activations, misses and latency; a brute
// force oracle for the dwell rule; dwell-threshold sweeps; and a comparison of
// gaze against wake-word and button activation channels.

#include <cstdint>
#include <string>
#include <vector>

#include "gaze/core.hpp"
#include "gaze/kernels.hpp"
#include "gaze/trace.hpp"

namespace gaze {

/// Activation times computed offline from raw samples (valid for the
/// classifier-none, smoothing-1 layer). Independent of the dwell machine:
/// on-target booleans per raw sample, span scan with grace bridging, interval
/// arithmetic for the dwell, then interaction timeout and cooldown blocking.
std::vector<double> oracle_activations(const Trace& trace, const EngineConfig& config);

/// Runs the engine and scores activations against intentional spans. An
/// activation inside a span that was already hit counts as false.
TrialMetrics run_trial(const Trace& trace, const EngineConfig& config, const std::vector<Span>& ground_truth);

struct SweepSpec {
    std::vector<std::string> scenarios{std::begin(kScenarioNames), std::end(kScenarioNames)};
    std::vector<double> thresholds{0.5, 1.0, 2.0, 3.0};
    std::vector<double> noise_levels{0.0, 0.5, 1.0, 2.0};
    int repetitions = 50;
    std::uint64_t seed = 1;
    EngineConfig base;
};

struct SweepRow {
    double threshold = 0.0;
    double noise = 0.0;
    double false_rate = 0.0;    // false activations per trial
    double miss_rate = 0.0;     // misses per intentional episode
    double mean_latency = 0.0;  // DwellStarted -> Activated, NaN when nothing activated

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Rows ordered by (threshold, noise). Traces depend only on (seed, noise,
/// repetition, scenario), so every threshold sees the same traces.
std::vector<SweepRow> sweep_threshold(const SweepSpec& spec, Execution exec = Execution::Parallel);

/// Monotonicity violations per noise level (false_rate and mean latency vs.
/// threshold, plus miss_rate). Empty means the trade-off holds.
std::vector<std::string> check_sweep(const std::vector<SweepRow>& rows);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct ChannelModel {
    enum class Kind { Gaze, WakeWord, Button };

    Kind kind = Kind::Gaze;
    EngineConfig gaze;            // Gaze
    double p_miss = 0.0;          // WakeWord
    double false_rate = 0.0;      // WakeWord, events per hour
    double utterance = 0.0;       // WakeWord, seconds
    double reach = 0.0;           // Button, seconds
    double hands_busy_miss = 0.0; // Button

    static ChannelModel gaze_channel(const EngineConfig& c = {});
    static ChannelModel wake_word(double p_miss, double false_rate, double utterance);
    static ChannelModel button(double reach, double hands_busy_miss);
};

std::string to_string(ChannelModel::Kind k);

/// Throws InvalidArgument when probabilities leave [0, 1] or rates are negative.
void validate_channel(const ChannelModel& m);

struct CompareSpec {
    int episodes = 200;
    double session_hours = 1.0;
    double noise = 0.5;  // gaze noise for generated episodes
    std::uint64_t seed = 7;
    std::vector<ChannelModel> channels;

    /// Example parameters used by the CLI when no config is given.
    static CompareSpec defaults();
};

struct CompareRow {
    std::string channel;
    double miss_rate = 0.0;
    double false_per_hour = 0.0;
    double mean_latency = 0.0;
    bool hands_free = false;
    bool silent = false;

    friend bool operator==(const CompareRow&, const CompareRow&) = default;
};

std::vector<CompareRow> compare_channels(const CompareSpec& spec, Execution exec = Execution::Parallel);

std::string compare_csv(const std::vector<CompareRow>& rows);

// Human-readable tables.
std::string sweep_table(const std::vector<SweepRow>& rows);
std::string compare_table(const std::vector<CompareRow>& rows);

// Config-file forms of the specs; fields override the defaults.
SweepSpec sweep_spec_from_json(const Json& j, SweepSpec base = {});
CompareSpec compare_spec_from_json(const Json& j, CompareSpec base = CompareSpec::defaults());

}  // namespace gaze
