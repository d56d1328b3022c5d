#pragma once

// Trace container and its line-delimited JSON file format:
//
//   line 1: {"format":"gaze-trace/1","rate_hz":<number|null>,"seed":<int|null>,"config":<object|null>, ...}
//   line n: {"t":<seconds>,"dir":[x,y,z],"valid":<bool>}
//
// Header keys beyond the four standard ones are kept verbatim (in order) in
// TraceMeta::extra. The simulator uses two of them: "activity_marks" and
// "intentional_spans".

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gaze/core.hpp"

namespace gaze {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kTraceFormat = "gaze-trace/1";

struct TraceMeta {
    std::optional<double> rate_hz;
    std::optional<std::int64_t> seed;
    std::optional<Json> config;
    Json extra = Json::object();

    friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct Trace {
    TraceMeta meta;
    std::vector<GazeSample> samples;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct Span {
    double start = 0.0;
    double end = 0.0;

    friend bool operator==(const Span&, const Span&) = default;
};

// Typed views over the simulator's metadata keys. Missing keys read as empty.
std::vector<double> activity_marks(const Trace& trace);
std::vector<Span> intentional_spans(const Trace& trace);
void set_activity_marks(Trace& trace, const std::vector<double>& marks);
void set_intentional_spans(Trace& trace, const std::vector<Span>& spans);

/// Throws ValidationError if timestamps are not strictly increasing or a valid
/// sample has a non-unit direction.
void validate_trace(const Trace& trace);

Trace read_trace(std::string_view text);
std::string write_trace(const Trace& trace);

Trace load_trace_file(const std::string& path);
void save_trace_file(const std::string& path, const Trace& trace);

// EngineConfig <-> JSON. Field names match the struct; the target is nested as
// {"yaw":..,"pitch":..,"radius":..}. Reading merges onto `base`, so partial
// objects act as overrides; unknown keys are rejected.
Json config_to_json(const EngineConfig& c);
EngineConfig config_from_json(const Json& j, EngineConfig base = {});

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

}  // namespace gaze
