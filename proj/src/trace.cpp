#include "gaze/trace.hpp"

#include <fstream>
#include <sstream>

namespace gaze {

namespace {

const char* const kStandardKeys[] = {"format", "rate_hz", "seed", "config"};

bool is_standard_key(const std::string& k) {
    for (const char* s : kStandardKeys) {
        if (k == s) return true;
    }
    return false;
}

Json parse_line(std::string_view line, std::size_t lineno) {
    try {
        return Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
}

TraceMeta parse_header(const Json& h, std::size_t lineno) {
    if (!h.is_object()) throw ParseError(lineno, "header must be a JSON object");
    auto fmt = h.find("format");
    if (fmt == h.end() || !fmt->is_string() || fmt->get<std::string>() != kTraceFormat) {
        throw ParseError(lineno, "header format must be \"gaze-trace/1\"");
    }

    TraceMeta meta;
    if (auto it = h.find("rate_hz"); it != h.end() && !it->is_null()) {
        if (!it->is_number()) throw ParseError(lineno, "rate_hz must be a number or null");
        meta.rate_hz = it->get<double>();
    }
    if (auto it = h.find("seed"); it != h.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw ParseError(lineno, "seed must be an integer or null");
        meta.seed = it->get<std::int64_t>();
    }
    if (auto it = h.find("config"); it != h.end() && !it->is_null()) {
        if (!it->is_object()) throw ParseError(lineno, "config must be an object or null");
        meta.config = *it;
    }
    for (auto it = h.begin(); it != h.end(); ++it) {
        if (!is_standard_key(it.key())) meta.extra[it.key()] = it.value();
    }
    return meta;
}

GazeSample parse_sample(const Json& j, std::size_t lineno) {
    if (!j.is_object() || j.size() != 3) {
        throw ParseError(lineno, "sample must be an object with keys t, dir, valid");
    }
    auto t = j.find("t");
    auto dir = j.find("dir");
    auto valid = j.find("valid");
    if (t == j.end() || !t->is_number()) throw ParseError(lineno, "sample t must be a number");
    if (dir == j.end() || !dir->is_array() || dir->size() != 3) {
        throw ParseError(lineno, "sample dir must be an array of 3 numbers");
    }
    for (const auto& c : *dir) {
        if (!c.is_number()) throw ParseError(lineno, "sample dir must be an array of 3 numbers");
    }
    if (valid == j.end() || !valid->is_boolean()) throw ParseError(lineno, "sample valid must be a boolean");

    return {t->get<double>(), {(*dir)[0].get<double>(), (*dir)[1].get<double>(), (*dir)[2].get<double>()},
            valid->get<bool>()};
}

}  // namespace

std::vector<double> activity_marks(const Trace& trace) {
    std::vector<double> out;
    if (auto it = trace.meta.extra.find("activity_marks"); it != trace.meta.extra.end() && it->is_array()) {
        for (const auto& v : *it) out.push_back(v.get<double>());
    }
    return out;
}

std::vector<Span> intentional_spans(const Trace& trace) {
    std::vector<Span> out;
    if (auto it = trace.meta.extra.find("intentional_spans"); it != trace.meta.extra.end() && it->is_array()) {
        for (const auto& v : *it) out.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    return out;
}

void set_activity_marks(Trace& trace, const std::vector<double>& marks) {
    trace.meta.extra["activity_marks"] = marks;
}

void set_intentional_spans(Trace& trace, const std::vector<Span>& spans) {
    Json arr = Json::array();
    for (const auto& s : spans) arr.push_back({s.start, s.end});
    trace.meta.extra["intentional_spans"] = std::move(arr);
}

void validate_trace(const Trace& trace) {
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const auto& s = trace.samples[i];
        if (i > 0 && !(s.t > trace.samples[i - 1].t)) {
            throw ValidationError("sample " + std::to_string(i) + ": timestamp " + std::to_string(s.t) +
                                  " not after " + std::to_string(trace.samples[i - 1].t));
        }
        if (s.valid && !is_unit(s.dir)) {
            throw ValidationError("sample " + std::to_string(i) + ": valid sample direction is not unit length");
        }
    }
}

Trace read_trace(std::string_view text) {
    Trace trace;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    bool have_header = false;

    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Json j = parse_line(line, lineno);
        if (!have_header) {
            trace.meta = parse_header(j, lineno);
            have_header = true;
            continue;
        }
        GazeSample s = parse_sample(j, lineno);
        if (!trace.samples.empty() && !(s.t > trace.samples.back().t)) {
            throw ValidationError("line " + std::to_string(lineno) + ": timestamp not strictly increasing");
        }
        if (s.valid && !is_unit(s.dir)) {
            throw ValidationError("line " + std::to_string(lineno) + ": valid sample direction is not unit length");
        }
        trace.samples.push_back(s);
    }
    if (!have_header) throw ParseError(1, "missing header line");
    return trace;
}

std::string write_trace(const Trace& trace) {
    Json header = Json::object();
    header["format"] = kTraceFormat;
    header["rate_hz"] = trace.meta.rate_hz ? Json(*trace.meta.rate_hz) : Json(nullptr);
    header["seed"] = trace.meta.seed ? Json(*trace.meta.seed) : Json(nullptr);
    header["config"] = trace.meta.config ? *trace.meta.config : Json(nullptr);
    for (auto it = trace.meta.extra.begin(); it != trace.meta.extra.end(); ++it) {
        header[it.key()] = it.value();
    }

    std::string out = header.dump();
    out += '\n';
    for (const auto& s : trace.samples) {
        Json line = Json::object();
        line["t"] = s.t;
        line["dir"] = {s.dir.x, s.dir.y, s.dir.z};
        line["valid"] = s.valid;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Trace load_trace_file(const std::string& path) { return read_trace(read_file(path)); }

void save_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << write_trace(trace);
}

Json config_to_json(const EngineConfig& c) {
    Json j = Json::object();
    j["dwell_threshold"] = c.dwell_threshold;
    j["grace_period"] = c.grace_period;
    j["target"] = {{"yaw", c.target.center.yaw}, {"pitch", c.target.center.pitch}, {"radius", c.target.radius}};
    j["smoothing_window"] = c.smoothing_window;
    j["classifier"] = to_string(c.classifier);
    j["velocity_threshold"] = c.velocity_threshold;
    j["dispersion_threshold"] = c.dispersion_threshold;
    j["dispersion_window"] = c.dispersion_window;
    j["interaction_timeout"] = c.interaction_timeout;
    j["cooldown"] = c.cooldown;
    return j;
}

EngineConfig config_from_json(const Json& j, EngineConfig base) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    auto num = [](const Json& v, const std::string& key) {
        if (!v.is_number()) throw InvalidArgument("config." + key + " must be a number");
        return v.get<double>();
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const Json& v = it.value();
        if (k == "dwell_threshold") base.dwell_threshold = num(v, k);
        else if (k == "grace_period") base.grace_period = num(v, k);
        else if (k == "velocity_threshold") base.velocity_threshold = num(v, k);
        else if (k == "dispersion_threshold") base.dispersion_threshold = num(v, k);
        else if (k == "dispersion_window") base.dispersion_window = num(v, k);
        else if (k == "interaction_timeout") base.interaction_timeout = num(v, k);
        else if (k == "cooldown") base.cooldown = num(v, k);
        else if (k == "smoothing_window") {
            if (!v.is_number_integer()) throw InvalidArgument("config.smoothing_window must be an integer");
            base.smoothing_window = v.get<int>();
        } else if (k == "classifier") {
            if (!v.is_string()) throw InvalidArgument("config.classifier must be a string");
            base.classifier = classifier_from_string(v.get<std::string>());
        } else if (k == "target") {
            if (!v.is_object()) throw InvalidArgument("config.target must be an object");
            for (auto t = v.begin(); t != v.end(); ++t) {
                if (t.key() == "yaw") base.target.center.yaw = num(t.value(), "target.yaw");
                else if (t.key() == "pitch") base.target.center.pitch = num(t.value(), "target.pitch");
                else if (t.key() == "radius") base.target.radius = num(t.value(), "target.radius");
                else throw InvalidArgument("unknown config key target." + t.key());
            }
        } else {
            throw InvalidArgument("unknown config key " + k);
        }
    }
    return base;
}

}  // namespace gaze
