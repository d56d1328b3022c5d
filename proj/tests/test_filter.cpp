#include <doctest.h>

#include <cmath>

#include "gaze/filter.hpp"
#include "gaze/geometry.hpp"
#include "gaze/rng.hpp"
#include "gaze/sim.hpp"

using namespace gaze;

namespace {

constexpr double kDt = 1.0 / 30.0;

std::vector<GazeSample> at_angles(const std::vector<AngularPosition>& ps, double dt = kDt) {
    std::vector<GazeSample> out;
    for (std::size_t i = 0; i < ps.size(); ++i) out.push_back({i * dt, dir_from_angles(ps[i]), true});
    return out;
}

std::vector<GazeSample> constant(std::size_t n, AngularPosition p = {0, 18}) {
    return at_angles(std::vector<AngularPosition>(n, p));
}

std::vector<LabeledSample> stream(const std::vector<GazeSample>& samples, const EngineConfig& c) {
    FilterChain chain(c);
    std::vector<LabeledSample> out;
    for (const auto& s : samples) {
        const auto got = chain.push(s);
        out.insert(out.end(), got.begin(), got.end());
    }
    const auto tail = chain.finish();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

// Random mixture of noisy fixations, saccades and dropouts of assorted lengths.
std::vector<GazeSample> random_samples(Rng& rng) {
    Scenario s;
    s.seed = rng.next();
    s.rate_hz = rng.bernoulli(0.5) ? 30.0 : rng.uniform(20.0, 90.0);
    AngularPosition here{rng.uniform(-20, 20), rng.uniform(-15, 25)};
    s.start = here;
    const int segs = static_cast<int>(rng.uniform(1.0, 12.0));
    for (int k = 0; k < segs; ++k) {
        const double u = rng.uniform();
        if (u < 0.45) {
            s.segments.push_back(Segment::fixate(here, rng.uniform(0.02, 1.0), rng.uniform(0.0, 1.5)));
        } else if (u < 0.75) {
            here = {rng.uniform(-20, 20), rng.uniform(-15, 25)};
            s.segments.push_back(Segment::saccade(here, rng.uniform(0.02, 0.15)));
        } else {
            s.segments.push_back(Segment::blink(rng.uniform(0.02, 0.5)));
        }
    }
    return gen_scenario(s).samples;
}

EngineConfig random_config(Rng& rng) {
    EngineConfig c;
    const double u = rng.uniform();
    c.classifier = u < 0.2 ? Classifier::None : (u < 0.6 ? Classifier::Velocity : Classifier::Dispersion);
    c.smoothing_window = static_cast<int>(rng.uniform(1.0, 8.0));
    c.grace_period = rng.uniform(0.0, 0.3);
    c.velocity_threshold = rng.uniform(5.0, 80.0);
    c.dispersion_threshold = rng.uniform(0.3, 3.0);
    c.dispersion_window = rng.uniform(0.02, 0.3);
    return c;
}

}  // namespace

TEST_CASE("smooth examples") {
    Rng rng(1);
    std::vector<GazeSample> noisy;
    for (int i = 0; i < 20; ++i) {
        noisy.push_back({i * kDt, dir_from_angles({rng.uniform(-5, 5), rng.uniform(-5, 5)}), i % 7 != 3});
    }
    CHECK(smooth(noisy, 1) == noisy);

    const auto c = constant(10);
    const auto sm = smooth(c, 3);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(angular_distance(sm[i].dir, c[i].dir) < 1e-9);
        CHECK(sm[i].t == c[i].t);
    }

    std::vector<AngularPosition> alt;
    for (int i = 0; i < 10; ++i) alt.push_back({i % 2 ? 1.0 : -1.0, 0.0});
    const auto out = smooth(at_angles(alt), 2);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(std::abs(angles_from_dir(out[i].dir).yaw) < 1e-6);

    CHECK_THROWS_AS(smooth(c, 0), InvalidArgument);
}

TEST_CASE("smooth passes invalid samples through and averages valid history only") {
    auto s = at_angles({{0, 0}, {0, 2}, {0, 0}, {0, 4}});
    s[2].valid = false;
    s[2].dir = {0, 0, 0};
    const auto out = smooth(s, 2);
    CHECK(out[2] == s[2]);
    // window of the last two *valid* directions: pitch 2 and 4
    CHECK(angles_from_dir(out[3].dir).pitch == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("classify_velocity examples") {
    const auto slow = at_angles({{0, 0}, {0.5, 0}, {1.0, 0}});
    const auto a = classify_velocity(slow, 30.0);
    for (const auto& l : a) CHECK(l.label == Label::Fixation);

    const auto fast = at_angles({{0, 0}, {2, 0}, {4, 0}});
    const auto b = classify_velocity(fast, 30.0);
    CHECK(b[1].label == Label::Saccade);
    CHECK(b[2].label == Label::Saccade);
    CHECK(b[0].label == Label::Saccade);  // head inherits its successor

    const auto single = classify_velocity(at_angles({{3, 3}}), 30.0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].label == Label::Fixation);

    auto bad = at_angles({{0, 0}, {0, 0}});
    bad[1].t = bad[0].t;
    CHECK_THROWS_AS(classify_velocity(bad, 30.0), ValidationError);
}

TEST_CASE("velocity classifier: static is fixation, large steps are saccade, invalid is lost") {
    for (const auto& l : classify_velocity(constant(40), 30.0)) CHECK(l.label == Label::Fixation);

    std::vector<AngularPosition> sweep;
    for (int i = 0; i < 12; ++i) sweep.push_back({-30.0 + 5.0 * i, 0.0});
    const auto labels = classify_velocity(at_angles(sweep), 30.0);
    for (std::size_t i = 1; i + 1 < labels.size(); ++i) CHECK(labels[i].label == Label::Saccade);

    auto gap = constant(6);
    gap[2].valid = gap[3].valid = false;
    const auto g = classify_velocity(gap, 30.0);
    CHECK(g[2].label == Label::Lost);
    CHECK(g[3].label == Label::Lost);
    CHECK(g[4].label == Label::Fixation);
}

TEST_CASE("classify_dispersion examples") {
    Rng rng(4);
    std::vector<AngularPosition> tight;
    for (int i = 0; i < 30; ++i) {
        const double a = rng.uniform(0, 2 * kPi);
        const double r = rng.uniform(0, 0.4);
        tight.push_back({r * std::cos(a), 18.0 + r * std::sin(a)});
    }
    for (double w : {0.05, 0.1, 0.5}) {
        for (const auto& l : classify_dispersion(at_angles(tight), 1.0, w)) CHECK(l.label == Label::Fixation);
    }

    // shorter than the window: no fixation can be established
    const auto shortrun = classify_dispersion(constant(3), 1.0, 0.1);
    for (const auto& l : shortrun) CHECK(l.label == Label::Saccade);

    CHECK_THROWS_AS(classify_dispersion(constant(3), 0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(classify_dispersion(constant(3), 1.0, 0.0), InvalidArgument);
}

TEST_CASE("classify_dispersion labels a 20 degree jump as saccade") {
    Scenario s;
    s.seed = 7;
    s.rate_hz = 100.0;
    s.start = {-10, 10};
    s.segments = {Segment::fixate({-10, 10}, 0.5, 0.2), Segment::saccade({10, 10}, 0.04),
                  Segment::fixate({10, 10}, 0.5, 0.2)};
    const auto samples = gen_scenario(s).samples;
    const auto labels = classify_dispersion(samples, 1.0, 0.1);
    // saccade samples 50..53; the interior two are mid-flight
    CHECK(labels[51].label == Label::Saccade);
    CHECK(labels[52].label == Label::Saccade);
    CHECK(labels[10].label == Label::Fixation);
    CHECK(labels[80].label == Label::Fixation);
}

TEST_CASE("bridge_dropouts examples") {
    auto s = constant(30, {0, 18});
    // 100 ms dropout: samples 10..12, next valid at 13 (3 intervals = 0.1 s)
    for (int i = 10; i <= 12; ++i) {
        s[i].valid = false;
        s[i].dir = {0, 0, 0};
    }
    s[9].dir = dir_from_angles({1, 18});

    CHECK(bridge_dropouts(s, 0.0) == s);

    const auto b = bridge_dropouts(s, 0.15);
    for (int i = 10; i <= 12; ++i) {
        CHECK(b[i].valid);
        CHECK(b[i].dir == s[9].dir);
        CHECK(b[i].t == s[i].t);
    }

    auto longgap = constant(30);
    for (int i = 5; i <= 16; ++i) longgap[i].valid = false;  // 400 ms
    CHECK(bridge_dropouts(longgap, 0.15) == longgap);

    auto edge = constant(10);
    edge[0].valid = edge[9].valid = false;  // not flanked by valid samples
    CHECK(bridge_dropouts(edge, 1.0) == edge);
}

TEST_CASE("property: bridging never touches valid samples or timestamps") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_samples(rng);
        const auto b = bridge_dropouts(s, rng.uniform(0.0, 0.4));
        REQUIRE(b.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(b[i].t == s[i].t);
            if (s[i].valid) CHECK(b[i] == s[i]);
        }
    }
}

TEST_CASE("filter_samples tags bridged samples as held") {
    auto s = constant(20);
    s[8].valid = s[9].valid = false;
    const auto out = filter_samples(s, EngineConfig{});
    CHECK(out[8].held);
    CHECK(out[9].held);
    CHECK(out[8].label == Label::Fixation);
    CHECK_FALSE(out[7].held);
    CHECK_FALSE(out[10].held);
}

TEST_CASE("property: labels partition the stream and are deterministic") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_samples(rng);
        const auto c = random_config(rng);
        const auto a = filter_samples(s, c);
        CHECK(a == filter_samples(s, c));
        REQUIRE(a.size() == s.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].t == s[i].t);
            const bool lost = a[i].label == Label::Lost;
            CHECK((lost || a[i].label == Label::Fixation || a[i].label == Label::Saccade));
            if (s[i].valid) CHECK_FALSE(lost);
        }
    }
}

TEST_CASE("property: incremental filter chain equals the batch filter") {
    Rng rng(99);
    for (int trial = 0; trial < 400; ++trial) {
        const auto s = random_samples(rng);
        const auto c = random_config(rng);
        CAPTURE(trial);
        CHECK(stream(s, c) == filter_samples(s, c));
    }
}

TEST_CASE("filter chain rejects bad input without consuming it") {
    FilterChain chain(EngineConfig{});
    chain.push({0.0, {0, 0, 1}, true});
    CHECK_THROWS_AS(chain.push({0.0, {0, 0, 1}, true}), ValidationError);
    CHECK_THROWS_AS(chain.push({0.1, {0, 0, 3}, true}), InvalidArgument);
    CHECK_NOTHROW(chain.push({0.1, {0, 0, 1}, true}));
}

TEST_CASE("zero-noise fixations are all fixation under the default filter") {
    Scenario s;
    s.seed = 3;
    s.segments = {Segment::fixate({0, 0}, 1.0, 0.0), Segment::fixate({5, 5}, 1.0, 0.0)};
    const auto labels = filter_samples(gen_scenario(s).samples, EngineConfig{});
    for (std::size_t i = 0; i < 30; ++i) CHECK(labels[i].label == Label::Fixation);
    for (std::size_t i = 45; i < 60; ++i) CHECK(labels[i].label == Label::Fixation);
}
