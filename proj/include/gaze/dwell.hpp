#pragma once

// The activation state machine. Sustained on-target fixation for
// dwell_threshold seconds activates the assistant; brief glances do not.
//
//   Idle --on-target fixation--> Dwelling --accum >= threshold--> (Activated) --> Interacting
//   Dwelling --off target longer than grace--> Idle
//   Interacting --timeout | end_interaction--> Cooldown --cooldown elapsed--> Idle
//
// Accumulation: the interval between two consecutive samples counts iff both
// are on-target fixations of the same dwell. An excursion (miss, saccade,
// lost or bridged sample) opens a grace window at its first sample t_b; the dwell is
// cancelled at the first later sample with t - t_b > grace_period.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaze/core.hpp"
#include "gaze/filter.hpp"
#include "gaze/geometry.hpp"
#include "gaze/trace.hpp"

namespace gaze {

enum class Phase { Idle, Dwelling, Activated, Interacting, Cooldown };

enum class EventKind {
    DwellStarted,
    DwellProgress,
    DwellCancelled,
    Activated,
    GreetingShown,
    InteractionStarted,
    InteractionEnded,
    CooldownEnded,
};

enum class CancelReason { LookAway, TrackingLost, Saccade };
enum class EndReason { ExplicitEnd, Timeout };

std::string to_string(Phase p);
std::string to_string(EventKind k);
std::string to_string(CancelReason r);
std::string to_string(EndReason r);
EventKind event_kind_from_string(std::string_view s);

struct EngineEvent {
    double t = 0.0;
    EventKind kind = EventKind::DwellStarted;
    double fraction = 0.0;       // DwellProgress
    double dwell_latency = 0.0;  // Activated
    CancelReason cancel_reason = CancelReason::LookAway;
    EndReason end_reason = EndReason::Timeout;

    friend bool operator==(const EngineEvent&, const EngineEvent&) = default;
};

struct DwellState {
    Phase phase = Phase::Idle;
    double phase_entered_t = 0.0;
    double on_target_accum = 0.0;
    std::optional<double> grace_deadline;
    double last_event_t = 0.0;

    // bookkeeping
    std::optional<double> last_sample_t;
    double dwell_start_t = 0.0;
    std::optional<double> grace_start_t;
    CancelReason grace_cause = CancelReason::LookAway;
    bool prev_on_target = false;
    int decile = 0;
    double last_activity_t = 0.0;

    /// Progress fraction reported to clients (0 outside Dwelling).
    double progress(const EngineConfig& c) const;
};

struct StepResult {
    DwellState state;
    std::vector<EngineEvent> events;
};

StepResult step(DwellState state, const LabeledSample& obs, const HitResult& hit, const EngineConfig& config);

/// Interaction activity at time t (keeps Interacting alive); ignored in other phases.
DwellState note_activity(DwellState state, double t);

/// Interacting -> Cooldown with InteractionEnded(explicit_end). Throws InvalidState otherwise.
StepResult end_interaction(DwellState state, double t);

/// Hit result for a labeled sample; lost samples never hit.
HitResult hit_for(const LabeledSample& obs, const TargetRegion& target);

/// Batch driver: filter the trace, hit-test, fold step from a fresh Idle state.
/// Activity marks from the trace metadata are applied before the first sample
/// at or after each mark.
std::vector<EngineEvent> run_session(const Trace& trace, const EngineConfig& config);

// Event log: one {"t":..,"kind":..,"fields":{..}} object per line.
Json event_to_json(const EngineEvent& e);
EngineEvent event_from_json(const Json& j);
std::string write_event_log(const std::vector<EngineEvent>& events);
std::vector<EngineEvent> read_event_log(std::string_view text);

}  // namespace gaze
