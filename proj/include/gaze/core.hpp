#pragma once

// Foundational gaze types, angular math and engine configuration.
//
// Frame convention (used everywhere): head-fixed, +Z forward, +Y up, +X right.
// Angles are yaw-then-pitch in degrees; yaw positive to the right, pitch
// positive up.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaze {

// Error idiom: exceptions. Each class maps to one error kind of the engine.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kUnitTolerance = 1e-6;
// Slack for comparing accumulated times against thresholds.
constexpr double kTimeEps = 1e-9;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);
bool is_unit(const Vec3& v, double tol = kUnitTolerance);

struct GazeSample {
    double t = 0.0;
    Vec3 dir{0.0, 0.0, 1.0};
    bool valid = true;

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct AngularPosition {
    double yaw = 0.0;
    double pitch = 0.0;

    friend bool operator==(const AngularPosition&, const AngularPosition&) = default;
};

struct TargetRegion {
    AngularPosition center;
    double radius = 5.0;

    friend bool operator==(const TargetRegion&, const TargetRegion&) = default;
};

enum class Classifier { None, Velocity, Dispersion };

std::string to_string(Classifier c);
Classifier classifier_from_string(const std::string& s);

struct EngineConfig {
    double dwell_threshold = 2.0;
    double grace_period = 0.15;
    TargetRegion target{{0.0, 18.0}, 5.0};
    int smoothing_window = 5;
    Classifier classifier = Classifier::Velocity;
    double velocity_threshold = 30.0;
    double dispersion_threshold = 1.0;
    double dispersion_window = 0.1;
    double interaction_timeout = 5.0;
    double cooldown = 1.0;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct Violation {
    std::string field;
    std::string message;
};

/// Every violated EngineConfig invariant, tagged with the field name. Empty means ok.
std::vector<Violation> validate_config(const EngineConfig& c);

/// Throws InvalidArgument listing all violations when the config is invalid.
void require_valid(const EngineConfig& c);

/// Angle between two unit vectors, degrees in [0, 180]. Throws on non-unit input.
double angular_distance(const Vec3& a, const Vec3& b);

Vec3 dir_from_angles(const AngularPosition& p);
AngularPosition angles_from_dir(const Vec3& d);

}  // namespace gaze
