#pragma once

// Raw gaze samples -> smoothed, labeled stream (fixation / saccade / lost).
//
// Two flavours of every stage:
//  * batch functions over a whole sample vector (used by run_session and the
//    evaluation harness);
//  * incremental operators that take one sample at a time and release output
//    once it is determinable (used by the live session service).
// The two are written independently and are expected to agree exactly.

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaze/core.hpp"

namespace gaze {

enum class Label { Fixation, Saccade, Lost };

std::string to_string(Label l);

struct LabeledSample {
    double t = 0.0;
    Vec3 dir{0.0, 0.0, 1.0};
    Label label = Label::Lost;
    bool held = false;  // raw sample was invalid and bridged with the previous direction

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

std::vector<GazeSample> smooth(std::span<const GazeSample> samples, int window);

/// Velocity-threshold identification. The first valid sample of each valid run
/// takes its successor's label; a single-sample run is a fixation.
std::vector<LabeledSample> classify_velocity(std::span<const GazeSample> samples, double v_threshold);

/// Dispersion-threshold identification (max pairwise angular distance).
std::vector<LabeledSample> classify_dispersion(std::span<const GazeSample> samples, double d_threshold,
                                               double window);

/// No classification: valid -> fixation, invalid -> lost.
std::vector<LabeledSample> classify_none(std::span<const GazeSample> samples);

/// Replaces invalid runs of duration <= max_gap that sit between valid samples
/// with the previous valid direction. Run duration is measured from the first
/// invalid sample to the next valid sample.
std::vector<GazeSample> bridge_dropouts(std::span<const GazeSample> samples, double max_gap);

/// bridge_dropouts(grace) -> smooth -> classify, as selected by the config.
/// Bridged samples come out with held = true.
std::vector<LabeledSample> filter_samples(std::span<const GazeSample> samples, const EngineConfig& config);

// ---- incremental operators -------------------------------------------------

class DropoutBridge {
public:
    explicit DropoutBridge(double max_gap);
    std::vector<GazeSample> push(const GazeSample& s);
    std::vector<GazeSample> finish();
    void set_max_gap(double max_gap) { max_gap_ = max_gap; }

private:
    double max_gap_;
    std::optional<Vec3> last_valid_;
    std::vector<GazeSample> pending_;
    bool overflow_ = false;
};

class Smoother {
public:
    explicit Smoother(int window);
    GazeSample push(const GazeSample& s);
    void set_window(int window);

private:
    std::size_t window_;
    std::deque<Vec3> history_;
};

class VelocityLabeler {
public:
    explicit VelocityLabeler(double v_threshold);
    std::vector<LabeledSample> push(const GazeSample& s);
    std::vector<LabeledSample> finish();
    void set_threshold(double v) { threshold_ = v; }

private:
    double threshold_;
    std::optional<GazeSample> prev_;
    std::optional<GazeSample> run_head_;  // first sample of a run, awaiting its successor
};

class DispersionLabeler {
public:
    DispersionLabeler(double d_threshold, double window);
    std::vector<LabeledSample> push(const GazeSample& s);
    std::vector<LabeledSample> finish();
    void set_params(double d_threshold, double window) {
        threshold_ = d_threshold;
        window_ = window;
    }

private:
    void resolve(bool run_ended, std::vector<LabeledSample>& out);
    void emit_front(std::size_t count, Label label, std::vector<LabeledSample>& out);

    double threshold_;
    double window_;
    std::deque<GazeSample> buf_;
    bool growing_ = false;
    std::size_t last_ = 0;  // index of the last member of the growing window
    double dispersion_ = 0.0;
};

/// Incremental equivalent of filter_samples. Also rejects non-increasing
/// timestamps with ValidationError (the offending sample is not consumed).
class FilterChain {
public:
    explicit FilterChain(const EngineConfig& config);
    std::vector<LabeledSample> push(const GazeSample& s);
    std::vector<LabeledSample> finish();
    /// Swaps parameters in place; buffered samples and histories are kept.
    /// Switching classifier flushes the old labeler, whose output is returned.
    std::vector<LabeledSample> reconfigure(const EngineConfig& config);

private:
    void label(const GazeSample& s, std::vector<LabeledSample>& out);
    std::vector<LabeledSample> tag(std::vector<LabeledSample> out);

    Classifier classifier_;
    DropoutBridge bridge_;
    Smoother smoother_;
    VelocityLabeler velocity_;
    DispersionLabeler dispersion_;
    std::optional<double> last_t_;
    std::deque<bool> raw_valid_;  // validity of inputs not yet released
};

}  // namespace gaze
