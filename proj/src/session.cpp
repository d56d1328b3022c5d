#include "gaze/session.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace gaze {

Json event_message(const EngineEvent& e) {
    Json j = Json::object();
    j["type"] = "event";
    const Json ev = event_to_json(e);
    for (auto it = ev.begin(); it != ev.end(); ++it) j[it.key()] = it.value();
    return j;
}

Json error_message(std::string_view code, std::string_view detail) {
    Json j = Json::object();
    j["type"] = "error";
    j["code"] = code;
    j["detail"] = detail;
    return j;
}

LiveSession::LiveSession(const EngineConfig& config) : active_(config), chain_(config) { require_valid(config); }

Json LiveSession::state_message() const {
    Json j = Json::object();
    j["type"] = "state";
    j["t"] = state_.last_sample_t ? Json(*state_.last_sample_t) : Json(nullptr);
    j["phase"] = to_string(state_.phase);
    j["progress"] = state_.progress(active_);
    return j;
}

void LiveSession::apply_pending_config() {
    if (!pending_ || state_.phase == Phase::Dwelling) return;
    active_ = *pending_;
    pending_.reset();
    // Samples flushed by a classifier switch belong to the old stream position;
    // they are stepped immediately so ordering is preserved.
    const auto flushed = chain_.reconfigure(active_);
    std::vector<Json> ignored;
    feed(flushed, ignored);
}

void LiveSession::feed(const std::vector<LabeledSample>& labeled, std::vector<Json>& out) {
    for (const auto& obs : labeled) {
        auto r = step(std::move(state_), obs, hit_for(obs, active_.target), active_);
        state_ = std::move(r.state);
        for (const auto& e : r.events) out.push_back(event_message(e));
    }
}

std::vector<Json> LiveSession::handle(std::string_view message) {
    Json msg;
    try {
        msg = Json::parse(message);
    } catch (const Json::parse_error&) {
        return {error_message("bad_message", "not a JSON object")};
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
        return {error_message("bad_message", "message needs a string \"type\"")};
    }
    const auto type = msg["type"].get<std::string>();
    try {
        if (type == "sample") return on_sample(msg);
        if (type == "configure") return on_configure(msg);
        if (type == "end_interaction") return on_end_interaction(msg);
        if (type == "reset") return on_reset();
    } catch (const Json::exception& e) {
        return {error_message("bad_message", e.what())};
    }
    return {error_message("bad_message", "unknown message type '" + type + "'")};
}

std::vector<Json> LiveSession::on_sample(const Json& msg) {
    if (!msg.contains("t") || !msg["t"].is_number()) return {error_message("bad_message", "sample needs numeric t")};
    GazeSample s;
    s.t = msg["t"].get<double>();
    s.valid = msg.value("valid", true);
    s.dir = {0.0, 0.0, 0.0};

    if (auto it = msg.find("angles"); it != msg.end() && it->is_array() && it->size() == 2) {
        s.dir = dir_from_angles({(*it)[0].get<double>(), (*it)[1].get<double>()});
    } else if (auto d = msg.find("dir"); d != msg.end() && d->is_array() && d->size() == 3) {
        s.dir = {(*d)[0].get<double>(), (*d)[1].get<double>(), (*d)[2].get<double>()};
    } else if (s.valid) {
        return {error_message("bad_message", "valid sample needs angles [yaw,pitch] or dir [x,y,z]")};
    }
    if (s.valid && !is_unit(s.dir)) return {error_message("bad_message", "sample dir is not a unit vector")};

    if (last_input_t_ && !(s.t > *last_input_t_)) {
        Json err = error_message("out_of_order", "t=" + Json(s.t).dump() + " is not after t=" +
                                                     Json(*last_input_t_).dump());
        err["t"] = s.t;
        return {err};
    }

    std::vector<Json> out;
    apply_pending_config();
    last_input_t_ = s.t;
    feed(chain_.push(s), out);
    out.push_back(state_message());
    return out;
}

std::vector<Json> LiveSession::on_configure(const Json& msg) {
    Json overrides = msg.contains("config") ? msg["config"] : Json::object();
    if (!msg.contains("config")) {
        for (auto it = msg.begin(); it != msg.end(); ++it) {
            if (it.key() != "type") overrides[it.key()] = it.value();
        }
    }
    try {
        const EngineConfig next = config_from_json(overrides, pending_.value_or(active_));
        require_valid(next);
        pending_ = next;
    } catch (const InvalidArgument& e) {
        return {error_message("bad_config", e.what())};
    }
    return {state_message()};
}

std::vector<Json> LiveSession::on_end_interaction(const Json& msg) {
    double t = state_.last_sample_t.value_or(0.0);
    if (auto it = msg.find("t"); it != msg.end() && it->is_number()) t = std::max(t, it->get<double>());
    if (state_.phase != Phase::Interacting) {
        return {error_message("invalid_state", "end_interaction requires Interacting, phase is " + to_string(state_.phase))};
    }
    auto r = end_interaction(state_, t);
    state_ = std::move(r.state);
    std::vector<Json> out;
    for (const auto& e : r.events) out.push_back(event_message(e));
    out.push_back(state_message());
    return out;
}

std::vector<Json> LiveSession::on_reset() {
    if (pending_) {
        active_ = *pending_;
        pending_.reset();
    }
    chain_ = FilterChain(active_);
    state_ = DwellState{};
    last_input_t_.reset();
    return {state_message()};
}

std::vector<Json> LiveSession::finish() {
    std::vector<Json> out;
    feed(chain_.finish(), out);
    return out;
}

void run_stdio(std::istream& in, std::ostream& out, const EngineConfig& config) {
    LiveSession session(config);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        for (const auto& m : session.handle(line)) out << m.dump() << '\n';
        out.flush();
    }
    for (const auto& m : session.finish()) out << m.dump() << '\n';
    out.flush();
}

}  // namespace gaze
