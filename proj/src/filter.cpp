#include "gaze/filter.hpp"

#include <algorithm>

namespace gaze {

namespace {

void require_increasing(std::span<const GazeSample> samples) {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t > samples[i - 1].t)) {
            throw ValidationError("non-increasing timestamp at sample " + std::to_string(i));
        }
    }
}

Vec3 mean_direction(const std::deque<Vec3>& dirs) {
    Vec3 sum;
    for (const auto& d : dirs) {
        sum.x += d.x;
        sum.y += d.y;
        sum.z += d.z;
    }
    return normalized(sum);
}

LabeledSample labeled(const GazeSample& s, Label l) { return {s.t, s.dir, l}; }

}  // namespace

std::string to_string(Label l) {
    switch (l) {
    case Label::Fixation: return "fixation";
    case Label::Saccade: return "saccade";
    case Label::Lost: return "lost";
    }
    return "lost";
}

std::vector<GazeSample> smooth(std::span<const GazeSample> samples, int window) {
    if (window < 1) throw InvalidArgument("smooth: window must be >= 1");
    std::vector<GazeSample> out(samples.begin(), samples.end());
    if (window == 1) return out;

    std::deque<Vec3> history;
    for (auto& s : out) {
        if (!s.valid) continue;
        history.push_back(s.dir);
        if (history.size() > static_cast<std::size_t>(window)) history.pop_front();
        s.dir = mean_direction(history);
    }
    return out;
}

std::vector<LabeledSample> classify_velocity(std::span<const GazeSample> samples, double v_threshold) {
    if (!(v_threshold > 0.0)) throw InvalidArgument("classify_velocity: threshold must be > 0");
    require_increasing(samples);

    const std::size_t n = samples.size();
    std::vector<LabeledSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[i];
        if (!s.valid) {
            out[i] = labeled(s, Label::Lost);
            continue;
        }
        if (i == 0 || !samples[i - 1].valid) {
            out[i] = labeled(s, Label::Fixation);  // provisional; fixed up below
            continue;
        }
        const double v = angular_distance(s.dir, samples[i - 1].dir) / (s.t - samples[i - 1].t);
        out[i] = labeled(s, v < v_threshold ? Label::Fixation : Label::Saccade);
    }
    // Run heads inherit their successor's label.
    for (std::size_t i = 0; i < n; ++i) {
        const bool head = samples[i].valid && (i == 0 || !samples[i - 1].valid);
        if (head && i + 1 < n && samples[i + 1].valid) out[i].label = out[i + 1].label;
    }
    return out;
}

std::vector<LabeledSample> classify_dispersion(std::span<const GazeSample> samples, double d_threshold,
                                               double window) {
    if (!(d_threshold > 0.0)) throw InvalidArgument("classify_dispersion: threshold must be > 0");
    if (!(window > 0.0)) throw InvalidArgument("classify_dispersion: window must be > 0");
    require_increasing(samples);

    const std::size_t n = samples.size();
    std::vector<LabeledSample> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = labeled(samples[i], samples[i].valid ? Label::Saccade : Label::Lost);

    auto spread_to = [&](std::size_t from, std::size_t to, std::size_t idx) {
        double m = 0.0;
        for (std::size_t k = from; k <= to; ++k) m = std::max(m, angular_distance(samples[k].dir, samples[idx].dir));
        return m;
    };

    std::size_t run_begin = 0;
    while (run_begin < n) {
        if (!samples[run_begin].valid) {
            ++run_begin;
            continue;
        }
        std::size_t run_end = run_begin;
        while (run_end < n && samples[run_end].valid) ++run_end;

        std::size_t i = run_begin;
        while (i < run_end) {
            std::size_t j = i;
            while (j < run_end && samples[j].t - samples[i].t < window - kTimeEps) ++j;
            if (j == run_end) break;  // remaining samples cannot span a window: saccade

            double disp = 0.0;
            for (std::size_t k = i + 1; k <= j; ++k) disp = std::max(disp, spread_to(i, k - 1, k));
            if (disp <= d_threshold) {
                std::size_t last = j;
                while (last + 1 < run_end) {
                    const double d = std::max(disp, spread_to(i, last, last + 1));
                    if (d > d_threshold) break;
                    disp = d;
                    ++last;
                }
                for (std::size_t k = i; k <= last; ++k) out[k].label = Label::Fixation;
                i = last + 1;
            } else {
                ++i;
            }
        }
        run_begin = run_end;
    }
    return out;
}

std::vector<LabeledSample> classify_none(std::span<const GazeSample> samples) {
    require_increasing(samples);
    std::vector<LabeledSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(labeled(s, s.valid ? Label::Fixation : Label::Lost));
    return out;
}

std::vector<GazeSample> bridge_dropouts(std::span<const GazeSample> samples, double max_gap) {
    if (!(max_gap >= 0.0)) throw InvalidArgument("bridge_dropouts: max_gap must be >= 0");
    std::vector<GazeSample> out(samples.begin(), samples.end());
    const std::size_t n = out.size();

    std::size_t i = 0;
    while (i < n) {
        if (out[i].valid) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < n && !out[end].valid) ++end;
        const bool flanked = i > 0 && end < n;
        if (flanked && out[end].t - out[i].t <= max_gap + kTimeEps) {
            const Vec3 held = out[i - 1].dir;
            for (std::size_t k = i; k < end; ++k) {
                out[k].valid = true;
                out[k].dir = held;
            }
        }
        i = end;
    }
    return out;
}

std::vector<LabeledSample> filter_samples(std::span<const GazeSample> samples, const EngineConfig& config) {
    const auto bridged = bridge_dropouts(samples, config.grace_period);
    const auto smoothed = smooth(bridged, config.smoothing_window);
    std::vector<LabeledSample> out;
    switch (config.classifier) {
    case Classifier::None: out = classify_none(smoothed); break;
    case Classifier::Velocity: out = classify_velocity(smoothed, config.velocity_threshold); break;
    case Classifier::Dispersion:
        out = classify_dispersion(smoothed, config.dispersion_threshold, config.dispersion_window);
        break;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].held = !samples[i].valid && out[i].label != Label::Lost;
    return out;
}

// ---- DropoutBridge ---------------------------------------------------------

DropoutBridge::DropoutBridge(double max_gap) : max_gap_(max_gap) {
    if (!(max_gap >= 0.0)) throw InvalidArgument("DropoutBridge: max_gap must be >= 0");
}

std::vector<GazeSample> DropoutBridge::push(const GazeSample& s) {
    std::vector<GazeSample> out;
    if (s.valid) {
        if (!pending_.empty()) {
            const bool bridge = last_valid_ && s.t - pending_.front().t <= max_gap_ + kTimeEps;
            for (auto p : pending_) {
                if (bridge) {
                    p.valid = true;
                    p.dir = *last_valid_;
                }
                out.push_back(p);
            }
            pending_.clear();
        }
        overflow_ = false;
        last_valid_ = s.dir;
        out.push_back(s);
        return out;
    }

    if (!last_valid_ || overflow_) {
        out.push_back(s);
        return out;
    }
    pending_.push_back(s);
    // Already longer than max_gap: the run can no longer be bridged.
    if (s.t - pending_.front().t > max_gap_ + kTimeEps) {
        out.insert(out.end(), pending_.begin(), pending_.end());
        pending_.clear();
        overflow_ = true;
    }
    return out;
}

std::vector<GazeSample> DropoutBridge::finish() {
    std::vector<GazeSample> out(pending_.begin(), pending_.end());
    pending_.clear();
    return out;
}

// ---- Smoother --------------------------------------------------------------

Smoother::Smoother(int window) { set_window(window); }

void Smoother::set_window(int window) {
    if (window < 1) throw InvalidArgument("Smoother: window must be >= 1");
    window_ = static_cast<std::size_t>(window);
    while (history_.size() > window_) history_.pop_front();
}

GazeSample Smoother::push(const GazeSample& s) {
    if (!s.valid) return s;
    history_.push_back(s.dir);
    while (history_.size() > window_) history_.pop_front();
    GazeSample out = s;
    if (window_ > 1) out.dir = mean_direction(history_);
    return out;
}

// ---- VelocityLabeler -------------------------------------------------------

VelocityLabeler::VelocityLabeler(double v_threshold) : threshold_(v_threshold) {
    if (!(v_threshold > 0.0)) throw InvalidArgument("VelocityLabeler: threshold must be > 0");
}

std::vector<LabeledSample> VelocityLabeler::push(const GazeSample& s) {
    std::vector<LabeledSample> out;
    if (!s.valid) {
        if (run_head_) out.push_back(labeled(*run_head_, Label::Fixation));
        run_head_.reset();
        prev_.reset();
        out.push_back(labeled(s, Label::Lost));
        return out;
    }
    if (!prev_) {
        run_head_ = s;
        prev_ = s;
        return out;
    }
    const double v = angular_distance(s.dir, prev_->dir) / (s.t - prev_->t);
    const Label l = v < threshold_ ? Label::Fixation : Label::Saccade;
    if (run_head_) {
        out.push_back(labeled(*run_head_, l));
        run_head_.reset();
    }
    out.push_back(labeled(s, l));
    prev_ = s;
    return out;
}

std::vector<LabeledSample> VelocityLabeler::finish() {
    std::vector<LabeledSample> out;
    if (run_head_) out.push_back(labeled(*run_head_, Label::Fixation));
    run_head_.reset();
    prev_.reset();
    return out;
}

// ---- DispersionLabeler -----------------------------------------------------

DispersionLabeler::DispersionLabeler(double d_threshold, double window) : threshold_(d_threshold), window_(window) {
    if (!(d_threshold > 0.0) || !(window > 0.0)) {
        throw InvalidArgument("DispersionLabeler: threshold and window must be > 0");
    }
}

void DispersionLabeler::emit_front(std::size_t count, Label label, std::vector<LabeledSample>& out) {
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(labeled(buf_.front(), label));
        buf_.pop_front();
    }
}

void DispersionLabeler::resolve(bool run_ended, std::vector<LabeledSample>& out) {
    for (;;) {
        if (growing_) {
            bool closed = false;
            while (last_ + 1 < buf_.size()) {
                double d = dispersion_;
                for (std::size_t k = 0; k <= last_; ++k) {
                    d = std::max(d, angular_distance(buf_[k].dir, buf_[last_ + 1].dir));
                }
                if (d > threshold_) {
                    closed = true;
                    break;
                }
                dispersion_ = d;
                ++last_;
            }
            if (!closed && !run_ended) return;
            emit_front(last_ + 1, Label::Fixation, out);
            growing_ = false;
            continue;
        }

        if (buf_.empty()) return;
        std::size_t j = 0;
        while (j < buf_.size() && buf_[j].t - buf_.front().t < window_ - kTimeEps) ++j;
        if (j == buf_.size()) {
            if (run_ended) emit_front(buf_.size(), Label::Saccade, out);
            return;
        }
        double disp = 0.0;
        for (std::size_t a = 0; a <= j; ++a) {
            for (std::size_t b = a + 1; b <= j; ++b) disp = std::max(disp, angular_distance(buf_[a].dir, buf_[b].dir));
        }
        if (disp <= threshold_) {
            growing_ = true;
            last_ = j;
            dispersion_ = disp;
        } else {
            emit_front(1, Label::Saccade, out);
        }
    }
}

std::vector<LabeledSample> DispersionLabeler::push(const GazeSample& s) {
    std::vector<LabeledSample> out;
    if (!s.valid) {
        resolve(true, out);
        out.push_back(labeled(s, Label::Lost));
        return out;
    }
    buf_.push_back(s);
    resolve(false, out);
    return out;
}

std::vector<LabeledSample> DispersionLabeler::finish() {
    std::vector<LabeledSample> out;
    resolve(true, out);
    return out;
}

// ---- FilterChain -----------------------------------------------------------

FilterChain::FilterChain(const EngineConfig& config)
    : classifier_(config.classifier),
      bridge_(config.grace_period),
      smoother_(config.smoothing_window),
      velocity_(config.velocity_threshold),
      dispersion_(config.dispersion_threshold, config.dispersion_window) {}

std::vector<LabeledSample> FilterChain::reconfigure(const EngineConfig& config) {
    require_valid(config);
    std::vector<LabeledSample> flushed;
    if (config.classifier != classifier_) {
        if (classifier_ == Classifier::Velocity) flushed = velocity_.finish();
        if (classifier_ == Classifier::Dispersion) flushed = dispersion_.finish();
    }
    bridge_.set_max_gap(config.grace_period);
    smoother_.set_window(config.smoothing_window);
    velocity_.set_threshold(config.velocity_threshold);
    dispersion_.set_params(config.dispersion_threshold, config.dispersion_window);
    classifier_ = config.classifier;
    return tag(std::move(flushed));
}

std::vector<LabeledSample> FilterChain::tag(std::vector<LabeledSample> out) {
    for (auto& o : out) {
        o.held = !raw_valid_.front() && o.label != Label::Lost;
        raw_valid_.pop_front();
    }
    return out;
}

void FilterChain::label(const GazeSample& s, std::vector<LabeledSample>& out) {
    const GazeSample sm = smoother_.push(s);
    std::vector<LabeledSample> got;
    switch (classifier_) {
    case Classifier::None: got.push_back(labeled(sm, sm.valid ? Label::Fixation : Label::Lost)); break;
    case Classifier::Velocity: got = velocity_.push(sm); break;
    case Classifier::Dispersion: got = dispersion_.push(sm); break;
    }
    out.insert(out.end(), got.begin(), got.end());
}

std::vector<LabeledSample> FilterChain::push(const GazeSample& s) {
    if (last_t_ && !(s.t > *last_t_)) {
        throw ValidationError("non-increasing timestamp " + std::to_string(s.t));
    }
    if (s.valid && !is_unit(s.dir)) throw InvalidArgument("sample direction is not unit length");
    last_t_ = s.t;
    raw_valid_.push_back(s.valid);

    std::vector<LabeledSample> out;
    for (const auto& b : bridge_.push(s)) label(b, out);
    return tag(std::move(out));
}

std::vector<LabeledSample> FilterChain::finish() {
    std::vector<LabeledSample> out;
    for (const auto& b : bridge_.finish()) label(b, out);
    std::vector<LabeledSample> tail;
    switch (classifier_) {
    case Classifier::None: break;
    case Classifier::Velocity: tail = velocity_.finish(); break;
    case Classifier::Dispersion: tail = dispersion_.finish(); break;
    }
    out.insert(out.end(), tail.begin(), tail.end());
    return tag(std::move(out));
}

}  // namespace gaze
