#pragma once

// Live engine session: one dwell machine fed one inbound message at a time.
//
// Inbound (one JSON object per message):
//   {"type":"sample","t":1.033,"angles":[yaw,pitch],"valid":true}   (or "dir":[x,y,z])
//   {"type":"configure","config":{...EngineConfig overrides...}}
//   {"type":"end_interaction"[,"t":..]}
//   {"type":"reset"}
// Outbound:
//   {"type":"event","t":..,"kind":..,"fields":{..}}
//   {"type":"state","t":..,"phase":..,"progress":..}        after every accepted message
//   {"type":"error","code":..,"detail":..[,"t":..]}
//
// Error codes: bad_message, out_of_order, bad_config, invalid_state. A failed
// message leaves the session as it was.

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "gaze/dwell.hpp"
#include "gaze/filter.hpp"

namespace gaze {

class LiveSession {
public:
    explicit LiveSession(const EngineConfig& config);

    std::vector<Json> handle(std::string_view message);

    /// End of input: flushes samples still held by the filter stages.
    std::vector<Json> finish();

    const DwellState& state() const { return state_; }
    const EngineConfig& config() const { return active_; }

private:
    std::vector<Json> on_sample(const Json& msg);
    std::vector<Json> on_configure(const Json& msg);
    std::vector<Json> on_end_interaction(const Json& msg);
    std::vector<Json> on_reset();

    void apply_pending_config();
    void feed(const std::vector<LabeledSample>& labeled, std::vector<Json>& out);
    Json state_message() const;

    EngineConfig active_;
    std::optional<EngineConfig> pending_;
    FilterChain chain_;
    DwellState state_;
    std::optional<double> last_input_t_;
};

Json event_message(const EngineEvent& e);
Json error_message(std::string_view code, std::string_view detail);

/// Line-delimited JSON over streams: each input line is one inbound message,
/// each outbound message is written as one line. Flushes at end of input.
void run_stdio(std::istream& in, std::ostream& out, const EngineConfig& config);

}  // namespace gaze
