#include "gaze/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaze {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0 || !std::isfinite(n)) {
        throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    return {v.x / n, v.y / n, v.z / n};
}

bool is_unit(const Vec3& v, double tol) { return std::abs(norm(v) - 1.0) <= tol; }

std::string to_string(Classifier c) {
    switch (c) {
    case Classifier::None: return "none";
    case Classifier::Velocity: return "velocity";
    case Classifier::Dispersion: return "dispersion";
    }
    return "velocity";
}

Classifier classifier_from_string(const std::string& s) {
    if (s == "none") return Classifier::None;
    if (s == "velocity") return Classifier::Velocity;
    if (s == "dispersion") return Classifier::Dispersion;
    throw InvalidArgument("unknown classifier '" + s + "'");
}

std::vector<Violation> validate_config(const EngineConfig& c) {
    std::vector<Violation> out;
    auto bad = [&](const char* field, const char* msg) { out.push_back({field, msg}); };

    if (!(c.dwell_threshold > 0.0)) bad("dwell_threshold", "must be > 0");
    if (!(c.grace_period >= 0.0)) bad("grace_period", "must be >= 0");
    if (!(c.grace_period < c.dwell_threshold)) bad("grace_period", "must be < dwell_threshold");
    if (!(c.target.radius > 0.0 && c.target.radius < 90.0)) bad("target.radius", "must be in (0, 90)");
    if (!(c.target.center.yaw >= -180.0 && c.target.center.yaw <= 180.0)) {
        bad("target.yaw", "must be in [-180, 180]");
    }
    if (!(c.target.center.pitch >= -90.0 && c.target.center.pitch <= 90.0)) {
        bad("target.pitch", "must be in [-90, 90]");
    }
    if (c.smoothing_window < 1) bad("smoothing_window", "must be >= 1");
    if (!(c.velocity_threshold > 0.0)) bad("velocity_threshold", "must be > 0");
    if (!(c.dispersion_threshold > 0.0)) bad("dispersion_threshold", "must be > 0");
    if (!(c.dispersion_window > 0.0)) bad("dispersion_window", "must be > 0");
    if (!(c.interaction_timeout > 0.0)) bad("interaction_timeout", "must be > 0");
    if (!(c.cooldown >= 0.0)) bad("cooldown", "must be >= 0");
    return out;
}

void require_valid(const EngineConfig& c) {
    const auto violations = validate_config(c);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& v : violations) os << ' ' << v.field << ' ' << v.message << ';';
    throw InvalidArgument(os.str());
}

double angular_distance(const Vec3& a, const Vec3& b) {
    if (!is_unit(a) || !is_unit(b)) {
        throw InvalidArgument("angular_distance: inputs must be unit vectors");
    }
    return rad2deg(std::acos(std::clamp(dot(a, b), -1.0, 1.0)));
}

Vec3 dir_from_angles(const AngularPosition& p) {
    const double yaw = deg2rad(p.yaw);
    const double pitch = deg2rad(p.pitch);
    return {std::sin(yaw) * std::cos(pitch), std::sin(pitch), std::cos(yaw) * std::cos(pitch)};
}

AngularPosition angles_from_dir(const Vec3& d) {
    const double pitch = std::asin(std::clamp(d.y, -1.0, 1.0));
    const double yaw = std::atan2(d.x, d.z);
    return {rad2deg(yaw), rad2deg(pitch)};
}

}  // namespace gaze
