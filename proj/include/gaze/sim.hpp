#pragma once

// Deterministic synthetic gaze traces: noisy fixations, minimum-jerk saccades,
// blinks and interaction-activity marks, plus the built-in episode scripts.
//
// Sample i of a generated trace sits at t = i / rate_hz, so the spacing is
// uniform across segment boundaries.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaze/core.hpp"
#include "gaze/rng.hpp"
#include "gaze/trace.hpp"

namespace gaze {

struct Segment {
    enum class Kind { Fixate, Saccade, Blink, ActivityMark };

    Kind kind = Kind::Fixate;
    AngularPosition target;   // fixation center or saccade destination
    double duration = 0.0;
    double noise_sigma = 0.0; // fixate only
    bool intentional = false; // part of a scripted intentional episode

    static Segment fixate(AngularPosition center, double duration, double noise_sigma, bool intentional = false);
    static Segment saccade(AngularPosition to, double duration, bool intentional = false);
    static Segment blink(double duration, bool intentional = false);
    static Segment activity_mark();
};

struct Scenario {
    std::optional<std::uint64_t> seed;
    double rate_hz = 30.0;
    AngularPosition start{0.0, 0.0};  // gaze position before the first segment
    std::vector<Segment> segments;
};

/// Sample count of a segment of `duration` at `rate_hz` (floor, tolerant of
/// products like 0.7 * 30 that land just below an integer).
std::size_t sample_count(double duration, double rate_hz);

std::vector<GazeSample> gen_fixation(const AngularPosition& center, double duration, double noise_sigma,
                                     double rate_hz, Rng& rng, std::size_t first_index = 0);

/// Slerp with a minimum-jerk profile; max(2, round(duration * rate)) samples,
/// first sample at `from`, last at `to`.
std::vector<GazeSample> gen_saccade(const AngularPosition& from, const AngularPosition& to, double duration,
                                    double rate_hz, std::size_t first_index = 0);

std::vector<GazeSample> gen_blink(double duration, double rate_hz, std::size_t first_index = 0);

/// Throws InvalidArgument on invalid scenarios or a missing seed.
void validate_scenario(const Scenario& s);

/// Concatenates segments. Metadata records rate and seed, activity marks (time
/// of the next sample after the mark) and intentional spans (first to last
/// sample of each contiguous run of intentional segments).
Trace gen_scenario(const Scenario& s);

struct NamedScenario {
    std::string name;
    Scenario scenario;
};

inline constexpr const char* kScenarioNames[] = {"intentional_gaze", "casual_glance", "task_with_incidental_sweeps",
                                                 "blink_during_dwell", "never_looks"};

/// The five fixed episode scripts for a target, noise level and seed.
std::vector<NamedScenario> builtin_scenarios(const TargetRegion& target, double noise_sigma, std::uint64_t seed);

/// One built-in script by name. Throws InvalidArgument for unknown names.
Scenario builtin_scenario(const std::string& name, const TargetRegion& target, double noise_sigma,
                          std::uint64_t seed);

/// A randomized variant of a built-in script (durations and waypoints drawn
/// from `variation_seed`) that keeps the script's character: casual glances stay
/// on target for at most 1.0 s, sweeps cross the target quickly, never_looks
/// stays in the lower task zone.
Scenario random_variant(const std::string& name, const TargetRegion& target, double noise_sigma,
                        std::uint64_t variation_seed);

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

}  // namespace gaze
