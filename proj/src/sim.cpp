#include "gaze/sim.hpp"

#include <algorithm>
#include <cmath>

namespace gaze {

namespace {

constexpr AngularPosition kTaskZone{0.0, 0.0};

double min_jerk(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

Vec3 slerp(const Vec3& a, const Vec3& b, double s) {
    const Vec3 cross{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    const double omega = std::atan2(norm(cross), dot(a, b));
    if (omega < 1e-12) return a;
    const double so = std::sin(omega);
    const double wa = std::sin((1.0 - s) * omega) / so;
    const double wb = std::sin(s * omega) / so;
    return normalized({wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z});
}

// Unit tangent vectors at a direction: +yaw (right) and +pitch (up).
std::pair<Vec3, Vec3> tangent_basis(const AngularPosition& p) {
    const double yaw = deg2rad(p.yaw);
    const double pitch = deg2rad(p.pitch);
    const Vec3 right{std::cos(yaw), 0.0, -std::sin(yaw)};
    const Vec3 up{-std::sin(yaw) * std::sin(pitch), std::cos(pitch), -std::cos(yaw) * std::sin(pitch)};
    return {right, up};
}

void check_angles(const AngularPosition& p, const char* what) {
    if (!(p.yaw >= -180.0 && p.yaw <= 180.0 && p.pitch > -90.0 && p.pitch < 90.0)) {
        throw InvalidArgument(std::string(what) + ": angles out of range");
    }
}

double time_of(std::size_t index, double rate_hz) { return static_cast<double>(index) / rate_hz; }

}  // namespace

Segment Segment::fixate(AngularPosition center, double duration, double noise_sigma, bool intentional) {
    return {Kind::Fixate, center, duration, noise_sigma, intentional};
}

Segment Segment::saccade(AngularPosition to, double duration, bool intentional) {
    return {Kind::Saccade, to, duration, 0.0, intentional};
}

Segment Segment::blink(double duration, bool intentional) { return {Kind::Blink, {}, duration, 0.0, intentional}; }

Segment Segment::activity_mark() { return {Kind::ActivityMark, {}, 0.0, 0.0, false}; }

std::size_t sample_count(double duration, double rate_hz) {
    return static_cast<std::size_t>(std::floor(duration * rate_hz + 1e-9));
}

std::vector<GazeSample> gen_fixation(const AngularPosition& center, double duration, double noise_sigma,
                                     double rate_hz, Rng& rng, std::size_t first_index) {
    if (!(duration > 0.0) || !(noise_sigma >= 0.0) || !(rate_hz > 0.0)) {
        throw InvalidArgument("gen_fixation: need duration > 0, noise_sigma >= 0, rate_hz > 0");
    }
    check_angles(center, "gen_fixation");

    const Vec3 c = dir_from_angles(center);
    const auto [right, up] = tangent_basis(center);
    const double sigma = deg2rad(noise_sigma);

    const std::size_t n = sample_count(duration, rate_hz);
    std::vector<GazeSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec3 d = c;
        if (sigma > 0.0) {
            const double a = rng.normal() * sigma;
            const double b = rng.normal() * sigma;
            d = normalized({c.x + a * right.x + b * up.x, c.y + a * right.y + b * up.y, c.z + a * right.z + b * up.z});
        }
        out.push_back({time_of(first_index + k, rate_hz), d, true});
    }
    return out;
}

std::vector<GazeSample> gen_saccade(const AngularPosition& from, const AngularPosition& to, double duration,
                                    double rate_hz, std::size_t first_index) {
    if (!(duration > 0.0) || !(rate_hz > 0.0)) throw InvalidArgument("gen_saccade: need duration > 0, rate_hz > 0");
    check_angles(from, "gen_saccade");
    check_angles(to, "gen_saccade");

    const Vec3 a = dir_from_angles(from);
    const Vec3 b = dir_from_angles(to);
    const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(duration * rate_hz)));
    std::vector<GazeSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(n - 1);
        Vec3 d = k == 0 ? a : (k == n - 1 ? b : slerp(a, b, min_jerk(s)));
        out.push_back({time_of(first_index + k, rate_hz), d, true});
    }
    return out;
}

std::vector<GazeSample> gen_blink(double duration, double rate_hz, std::size_t first_index) {
    if (!(duration > 0.0) || !(rate_hz > 0.0)) throw InvalidArgument("gen_blink: need duration > 0, rate_hz > 0");
    const std::size_t n = sample_count(duration, rate_hz);
    std::vector<GazeSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back({time_of(first_index + k, rate_hz), {0.0, 0.0, 0.0}, false});
    return out;
}

void validate_scenario(const Scenario& s) {
    if (!s.seed) throw InvalidArgument("scenario: seed is required");
    if (!(s.rate_hz > 0.0)) throw InvalidArgument("scenario: rate_hz must be > 0");
    check_angles(s.start, "scenario start");
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        const auto& seg = s.segments[i];
        const std::string where = "scenario segment " + std::to_string(i);
        if (seg.kind == Segment::Kind::ActivityMark) continue;
        if (!(seg.duration > 0.0)) throw InvalidArgument(where + ": duration must be > 0");
        if (!(seg.noise_sigma >= 0.0)) throw InvalidArgument(where + ": noise_sigma must be >= 0");
        if (seg.kind != Segment::Kind::Blink) check_angles(seg.target, where.c_str());
    }
}

Trace gen_scenario(const Scenario& s) {
    validate_scenario(s);
    Rng rng(*s.seed);
    Trace trace;
    trace.meta.rate_hz = s.rate_hz;
    trace.meta.seed = static_cast<std::int64_t>(*s.seed);

    std::vector<double> marks;
    std::vector<Span> spans;
    std::optional<Span> open_span;
    AngularPosition gaze = s.start;

    for (const auto& seg : s.segments) {
        const std::size_t first = trace.samples.size();
        std::vector<GazeSample> part;
        switch (seg.kind) {
        case Segment::Kind::Fixate:
            part = gen_fixation(seg.target, seg.duration, seg.noise_sigma, s.rate_hz, rng, first);
            gaze = seg.target;
            break;
        case Segment::Kind::Saccade:
            part = gen_saccade(gaze, seg.target, seg.duration, s.rate_hz, first);
            gaze = seg.target;
            break;
        case Segment::Kind::Blink: part = gen_blink(seg.duration, s.rate_hz, first); break;
        case Segment::Kind::ActivityMark: marks.push_back(time_of(first, s.rate_hz)); break;
        }
        if (seg.kind == Segment::Kind::ActivityMark || part.empty()) continue;

        if (seg.intentional) {
            if (!open_span) open_span = Span{part.front().t, part.back().t};
            open_span->end = part.back().t;
        } else if (open_span) {
            spans.push_back(*open_span);
            open_span.reset();
        }
        trace.samples.insert(trace.samples.end(), part.begin(), part.end());
    }
    if (open_span) spans.push_back(*open_span);

    set_activity_marks(trace, marks);
    set_intentional_spans(trace, spans);
    return trace;
}

Scenario builtin_scenario(const std::string& name, const TargetRegion& target, double noise_sigma,
                          std::uint64_t seed) {
    const AngularPosition av = target.center;
    Scenario s;
    s.seed = seed;
    s.start = kTaskZone;
    auto& g = s.segments;

    if (name == "intentional_gaze") {
        g = {Segment::fixate(kTaskZone, 3.0, noise_sigma), Segment::saccade(av, 0.06, true),
             Segment::fixate(av, 2.5, noise_sigma, true)};
    } else if (name == "casual_glance") {
        g = {Segment::fixate(kTaskZone, 2.0, noise_sigma), Segment::saccade(av, 0.06),
             Segment::fixate(av, 0.5, noise_sigma), Segment::saccade(kTaskZone, 0.06),
             Segment::fixate(kTaskZone, 2.0, noise_sigma)};
    } else if (name == "task_with_incidental_sweeps") {
        // Scanning between a low-left and a high-right point; the path passes
        // through the avatar center.
        const AngularPosition low{av.yaw - 10.0, av.pitch - 13.0};
        const AngularPosition high{av.yaw + 10.0, av.pitch + 13.0};
        g = {Segment::fixate(kTaskZone, 1.5, noise_sigma), Segment::saccade(low, 0.1)};
        for (int i = 0; i < 3; ++i) {
            g.push_back(Segment::fixate(low, 1.0, noise_sigma));
            g.push_back(Segment::saccade(high, 0.15));
            g.push_back(Segment::fixate(high, 0.4, noise_sigma));
            g.push_back(Segment::saccade(low, 0.15));
        }
        g.push_back(Segment::fixate(low, 1.0, noise_sigma));
    } else if (name == "blink_during_dwell") {
        s.start = av;
        g = {Segment::fixate(av, 1.5, noise_sigma, true), Segment::blink(0.1, true),
             Segment::fixate(av, 0.6, noise_sigma, true)};
    } else if (name == "never_looks") {
        const AngularPosition a{-8.0, -4.0};
        const AngularPosition b{6.0, 3.0};
        g = {Segment::fixate(kTaskZone, 2.0, noise_sigma), Segment::saccade(a, 0.05),
             Segment::fixate(a, 2.0, noise_sigma),         Segment::saccade(b, 0.06),
             Segment::fixate(b, 2.0, noise_sigma),         Segment::saccade(kTaskZone, 0.05),
             Segment::fixate(kTaskZone, 1.5, noise_sigma)};
    } else {
        throw InvalidArgument("unknown scenario '" + name + "'");
    }
    return s;
}

std::vector<NamedScenario> builtin_scenarios(const TargetRegion& target, double noise_sigma, std::uint64_t seed) {
    std::vector<NamedScenario> out;
    for (const char* name : kScenarioNames) out.push_back({name, builtin_scenario(name, target, noise_sigma, seed)});
    return out;
}

Scenario random_variant(const std::string& name, const TargetRegion& target, double noise_sigma,
                        std::uint64_t variation_seed) {
    Rng rng(derive_seed(variation_seed, {1}));
    const AngularPosition av = target.center;
    auto near_avatar = [&](double frac) {
        return AngularPosition{av.yaw + rng.uniform(-frac, frac) * target.radius,
                               av.pitch + rng.uniform(-frac, frac) * target.radius};
    };
    auto task_point = [&] { return AngularPosition{rng.uniform(-12.0, 12.0), rng.uniform(-10.0, 4.0)}; };

    Scenario s;
    s.seed = derive_seed(variation_seed, {2});
    s.start = kTaskZone;
    auto& g = s.segments;

    if (name == "intentional_gaze") {
        const AngularPosition task = task_point();
        const AngularPosition look = near_avatar(0.3);
        g = {Segment::fixate(task, rng.uniform(1.0, 3.0), noise_sigma), Segment::saccade(look, 0.06, true),
             Segment::fixate(look, rng.uniform(2.5, 3.5), noise_sigma, true)};
    } else if (name == "casual_glance") {
        const int glances = 1 + static_cast<int>(rng.uniform() * 3.0);
        g.push_back(Segment::fixate(task_point(), rng.uniform(1.0, 2.0), noise_sigma));
        for (int i = 0; i < glances; ++i) {
            // The saccade's final sample already lands on the avatar, so the
            // fixation is capped one sample short of 1.0 s.
            g.push_back(Segment::saccade(near_avatar(0.3), 0.06));
            g.push_back(Segment::fixate(g.back().target, rng.uniform(0.1, 0.95), noise_sigma));
            const AngularPosition back = task_point();
            g.push_back(Segment::saccade(back, 0.06));
            g.push_back(Segment::fixate(back, rng.uniform(1.0, 2.0), noise_sigma));
        }
    } else if (name == "task_with_incidental_sweeps") {
        const int sweeps = 2 + static_cast<int>(rng.uniform() * 3.0);
        const double dy = rng.uniform(8.0, 14.0);
        const double dp = rng.uniform(10.0, 16.0);
        const double off = rng.uniform(-0.4, 0.4) * target.radius;
        const AngularPosition low{av.yaw - dy + off, av.pitch - dp};
        const AngularPosition high{av.yaw + dy + off, av.pitch + dp};
        g = {Segment::fixate(kTaskZone, rng.uniform(1.0, 2.0), noise_sigma), Segment::saccade(low, 0.1)};
        for (int i = 0; i < sweeps; ++i) {
            g.push_back(Segment::fixate(low, rng.uniform(0.6, 1.5), noise_sigma));
            g.push_back(Segment::saccade(high, rng.uniform(0.12, 0.2)));
            g.push_back(Segment::fixate(high, rng.uniform(0.3, 0.6), noise_sigma));
            g.push_back(Segment::saccade(low, rng.uniform(0.12, 0.2)));
        }
        g.push_back(Segment::fixate(low, 1.0, noise_sigma));
    } else if (name == "blink_during_dwell") {
        const AngularPosition look = near_avatar(0.3);
        const double before = rng.uniform(1.0, 1.8);
        g = {Segment::fixate(task_point(), rng.uniform(1.0, 3.0), noise_sigma), Segment::saccade(look, 0.06, true),
             Segment::fixate(look, before, noise_sigma, true), Segment::blink(0.1, true),
             Segment::fixate(look, 2.6 - before, noise_sigma, true)};
    } else if (name == "never_looks") {
        AngularPosition here = task_point();
        g.push_back(Segment::fixate(here, rng.uniform(1.0, 2.5), noise_sigma));
        for (int i = 0; i < 3; ++i) {
            here = task_point();
            g.push_back(Segment::saccade(here, 0.05));
            g.push_back(Segment::fixate(here, rng.uniform(1.0, 2.5), noise_sigma));
        }
    } else {
        throw InvalidArgument("unknown scenario '" + name + "'");
    }
    return s;
}

namespace {

Json angles_json(const AngularPosition& p) { return Json::array({p.yaw, p.pitch}); }

AngularPosition angles_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidArgument(where + ": expected [yaw, pitch]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
    Json j = Json::object();
    j["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
    j["rate_hz"] = s.rate_hz;
    j["start"] = angles_json(s.start);
    Json segs = Json::array();
    for (const auto& seg : s.segments) {
        Json o = Json::object();
        switch (seg.kind) {
        case Segment::Kind::Fixate:
            o["kind"] = "fixate";
            o["center"] = angles_json(seg.target);
            o["duration"] = seg.duration;
            o["noise_sigma"] = seg.noise_sigma;
            break;
        case Segment::Kind::Saccade:
            o["kind"] = "saccade";
            o["to"] = angles_json(seg.target);
            o["duration"] = seg.duration;
            break;
        case Segment::Kind::Blink:
            o["kind"] = "blink";
            o["duration"] = seg.duration;
            break;
        case Segment::Kind::ActivityMark: o["kind"] = "activity_mark"; break;
        }
        if (seg.intentional) o["intentional"] = true;
        segs.push_back(std::move(o));
    }
    j["segments"] = std::move(segs);
    return j;
}

Scenario scenario_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("scenario must be a JSON object");
    Scenario s;
    if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
        if (!it->is_number_unsigned() && !it->is_number_integer()) throw InvalidArgument("scenario seed must be an integer");
        s.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("rate_hz"); it != j.end()) {
        if (!it->is_number()) throw InvalidArgument("scenario rate_hz must be a number");
        s.rate_hz = it->get<double>();
    }
    if (auto it = j.find("start"); it != j.end()) s.start = angles_from_json(*it, "scenario start");

    auto segs = j.find("segments");
    if (segs == j.end() || !segs->is_array()) throw InvalidArgument("scenario needs a segments array");
    for (std::size_t i = 0; i < segs->size(); ++i) {
        const Json& o = (*segs)[i];
        const std::string where = "segment " + std::to_string(i);
        if (!o.is_object() || !o.contains("kind") || !o["kind"].is_string()) {
            throw InvalidArgument(where + ": needs a kind");
        }
        auto num = [&](const char* key) {
            if (!o.contains(key) || !o[key].is_number()) throw InvalidArgument(where + ": missing number " + key);
            return o[key].get<double>();
        };
        const bool intentional = o.value("intentional", false);
        const auto kind = o["kind"].get<std::string>();
        if (kind == "fixate") {
            s.segments.push_back(Segment::fixate(angles_from_json(o.value("center", Json()), where), num("duration"),
                                                 o.contains("noise_sigma") ? num("noise_sigma") : 0.0, intentional));
        } else if (kind == "saccade") {
            s.segments.push_back(Segment::saccade(angles_from_json(o.value("to", Json()), where), num("duration"),
                                                  intentional));
        } else if (kind == "blink") {
            s.segments.push_back(Segment::blink(num("duration"), intentional));
        } else if (kind == "activity_mark") {
            s.segments.push_back(Segment::activity_mark());
        } else {
            throw InvalidArgument(where + ": unknown kind '" + kind + "'");
        }
    }
    return s;
}

}  // namespace gaze
