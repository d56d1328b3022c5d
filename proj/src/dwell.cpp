#include "gaze/dwell.hpp"

#include <algorithm>
#include <cmath>

namespace gaze {

std::string to_string(Phase p) {
    switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Dwelling: return "Dwelling";
    case Phase::Activated: return "Activated";
    case Phase::Interacting: return "Interacting";
    case Phase::Cooldown: return "Cooldown";
    }
    return "Idle";
}

std::string to_string(EventKind k) {
    switch (k) {
    case EventKind::DwellStarted: return "DwellStarted";
    case EventKind::DwellProgress: return "DwellProgress";
    case EventKind::DwellCancelled: return "DwellCancelled";
    case EventKind::Activated: return "Activated";
    case EventKind::GreetingShown: return "GreetingShown";
    case EventKind::InteractionStarted: return "InteractionStarted";
    case EventKind::InteractionEnded: return "InteractionEnded";
    case EventKind::CooldownEnded: return "CooldownEnded";
    }
    return "DwellStarted";
}

std::string to_string(CancelReason r) {
    switch (r) {
    case CancelReason::LookAway: return "look_away";
    case CancelReason::TrackingLost: return "tracking_lost";
    case CancelReason::Saccade: return "saccade";
    }
    return "look_away";
}

std::string to_string(EndReason r) { return r == EndReason::ExplicitEnd ? "explicit_end" : "timeout"; }

EventKind event_kind_from_string(std::string_view s) {
    for (auto k : {EventKind::DwellStarted, EventKind::DwellProgress, EventKind::DwellCancelled, EventKind::Activated,
                   EventKind::GreetingShown, EventKind::InteractionStarted, EventKind::InteractionEnded,
                   EventKind::CooldownEnded}) {
        if (to_string(k) == s) return k;
    }
    throw InvalidArgument("unknown event kind '" + std::string(s) + "'");
}

double DwellState::progress(const EngineConfig& c) const {
    if (phase != Phase::Dwelling) return 0.0;
    return std::clamp(on_target_accum / c.dwell_threshold, 0.0, 1.0);
}

namespace {

EngineEvent make(double t, EventKind k) {
    EngineEvent e;
    e.t = t;
    e.kind = k;
    return e;
}

void to_idle(DwellState& s, double t) {
    s.phase = Phase::Idle;
    s.phase_entered_t = t;
    s.on_target_accum = 0.0;
    s.grace_deadline.reset();
    s.grace_start_t.reset();
    s.prev_on_target = false;
    s.decile = 0;
}

}  // namespace

HitResult hit_for(const LabeledSample& obs, const TargetRegion& target) {
    if (obs.label == Label::Lost) return {};
    return hit_test(obs.dir, target);
}

StepResult step(DwellState s, const LabeledSample& obs, const HitResult& hit, const EngineConfig& c) {
    require_valid(c);
    const double t = obs.t;
    if (s.last_sample_t && !(t > *s.last_sample_t)) {
        throw ValidationError("out-of-order sample t=" + std::to_string(t) + " (last " +
                              std::to_string(*s.last_sample_t) + ")");
    }
    std::vector<EngineEvent> ev;
    // Held (bridged) samples keep a dwell alive but are grace time, not dwell time.
    const bool on_target = obs.label == Label::Fixation && hit.hit && !obs.held;

    if (s.phase == Phase::Interacting && t - s.last_activity_t > c.interaction_timeout) {
        EngineEvent e = make(t, EventKind::InteractionEnded);
        e.end_reason = EndReason::Timeout;
        ev.push_back(e);
        s.phase = Phase::Cooldown;
        s.phase_entered_t = t;
    }
    if (s.phase == Phase::Cooldown && t - s.phase_entered_t >= c.cooldown - kTimeEps) {
        ev.push_back(make(t, EventKind::CooldownEnded));
        to_idle(s, t);
    }
    if (s.phase == Phase::Dwelling && s.grace_start_t && t - *s.grace_start_t > c.grace_period + kTimeEps) {
        EngineEvent e = make(t, EventKind::DwellCancelled);
        e.cancel_reason = s.grace_cause;
        ev.push_back(e);
        to_idle(s, t);
    }

    if (s.phase == Phase::Idle) {
        if (on_target) {
            s.phase = Phase::Dwelling;
            s.phase_entered_t = t;
            s.dwell_start_t = t;
            s.on_target_accum = 0.0;
            s.prev_on_target = true;
            s.decile = 0;
            s.grace_start_t.reset();
            s.grace_deadline.reset();
            ev.push_back(make(t, EventKind::DwellStarted));
        }
    } else if (s.phase == Phase::Dwelling) {
        if (on_target) {
            if (s.prev_on_target) s.on_target_accum += t - *s.last_sample_t;
            s.prev_on_target = true;
            s.grace_start_t.reset();
            s.grace_deadline.reset();

            const bool done = s.on_target_accum >= c.dwell_threshold - kTimeEps;
            const int dec =
                done ? 10 : std::min(9, static_cast<int>(std::floor((s.on_target_accum + kTimeEps) / c.dwell_threshold * 10.0)));
            if (dec > s.decile) {
                EngineEvent e = make(t, EventKind::DwellProgress);
                e.fraction = dec / 10.0;
                ev.push_back(e);
                s.decile = dec;
            }
            if (done) {
                EngineEvent a = make(t, EventKind::Activated);
                a.dwell_latency = t - s.dwell_start_t;
                ev.push_back(a);
                ev.push_back(make(t, EventKind::GreetingShown));
                ev.push_back(make(t, EventKind::InteractionStarted));
                to_idle(s, t);
                s.phase = Phase::Interacting;
                s.last_activity_t = t;
            }
        } else {
            CancelReason cause = CancelReason::Saccade;
            if (obs.label == Label::Lost || obs.held) cause = CancelReason::TrackingLost;
            else if (!hit.hit) cause = CancelReason::LookAway;
            if (!s.grace_start_t) {
                s.grace_start_t = t;
                s.grace_deadline = t + c.grace_period;
                s.grace_cause = cause;
            } else if (s.grace_cause == CancelReason::Saccade) {
                // an on-target saccade is transient; the first miss or loss names the excursion
                s.grace_cause = cause;
            }
            s.prev_on_target = false;
        }
    }

    s.last_sample_t = t;
    if (!ev.empty()) s.last_event_t = t;
    return {std::move(s), std::move(ev)};
}

DwellState note_activity(DwellState s, double t) {
    if (s.phase == Phase::Interacting) s.last_activity_t = std::max(s.last_activity_t, t);
    return s;
}

StepResult end_interaction(DwellState s, double t) {
    if (s.phase != Phase::Interacting) {
        throw InvalidState("end_interaction requires phase Interacting, not " + to_string(s.phase));
    }
    if (t < s.last_event_t) {
        throw ValidationError("end_interaction at t=" + std::to_string(t) + " precedes last event");
    }
    s.phase = Phase::Cooldown;
    s.phase_entered_t = t;
    s.last_event_t = t;
    EngineEvent e = make(t, EventKind::InteractionEnded);
    e.end_reason = EndReason::ExplicitEnd;
    return {std::move(s), {e}};
}

std::vector<EngineEvent> run_session(const Trace& trace, const EngineConfig& config) {
    require_valid(config);
    validate_trace(trace);

    const auto labeled = filter_samples(trace.samples, config);
    auto marks = activity_marks(trace);
    std::sort(marks.begin(), marks.end());

    std::vector<EngineEvent> events;
    DwellState state;
    std::size_t next_mark = 0;
    for (const auto& obs : labeled) {
        while (next_mark < marks.size() && marks[next_mark] <= obs.t) {
            state = note_activity(std::move(state), marks[next_mark]);
            ++next_mark;
        }
        auto r = step(std::move(state), obs, hit_for(obs, config.target), config);
        state = std::move(r.state);
        events.insert(events.end(), r.events.begin(), r.events.end());
    }
    return events;
}

Json event_to_json(const EngineEvent& e) {
    Json fields = Json::object();
    switch (e.kind) {
    case EventKind::DwellProgress: fields["fraction"] = e.fraction; break;
    case EventKind::DwellCancelled: fields["reason"] = to_string(e.cancel_reason); break;
    case EventKind::Activated: fields["dwell_latency"] = e.dwell_latency; break;
    case EventKind::InteractionEnded: fields["reason"] = to_string(e.end_reason); break;
    default: break;
    }
    Json j = Json::object();
    j["t"] = e.t;
    j["kind"] = to_string(e.kind);
    j["fields"] = std::move(fields);
    return j;
}

EngineEvent event_from_json(const Json& j) {
    EngineEvent e;
    e.t = j.at("t").get<double>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    const Json fields = j.contains("fields") ? j.at("fields") : Json::object();
    switch (e.kind) {
    case EventKind::DwellProgress: e.fraction = fields.at("fraction").get<double>(); break;
    case EventKind::Activated: e.dwell_latency = fields.at("dwell_latency").get<double>(); break;
    case EventKind::DwellCancelled: {
        const auto r = fields.at("reason").get<std::string>();
        if (r == "look_away") e.cancel_reason = CancelReason::LookAway;
        else if (r == "tracking_lost") e.cancel_reason = CancelReason::TrackingLost;
        else if (r == "saccade") e.cancel_reason = CancelReason::Saccade;
        else throw InvalidArgument("unknown cancel reason '" + r + "'");
        break;
    }
    case EventKind::InteractionEnded: {
        const auto r = fields.at("reason").get<std::string>();
        if (r == "explicit_end") e.end_reason = EndReason::ExplicitEnd;
        else if (r == "timeout") e.end_reason = EndReason::Timeout;
        else throw InvalidArgument("unknown end reason '" + r + "'");
        break;
    }
    default: break;
    }
    return e;
}

std::string write_event_log(const std::vector<EngineEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        out += event_to_json(e).dump();
        out += '\n';
    }
    return out;
}

std::vector<EngineEvent> read_event_log(std::string_view text) {
    std::vector<EngineEvent> out;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(event_from_json(Json::parse(line)));
        } catch (const Json::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return out;
}

}  // namespace gaze
