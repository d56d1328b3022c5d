#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gaze/filter.hpp"
#include "gaze/geometry.hpp"
#include "gaze/sim.hpp"

using namespace gaze;

namespace {

const TargetRegion kTarget = EngineConfig{}.target;

// Longest run of consecutive on-target valid samples, in seconds (first to last sample).
double longest_on_target(const Trace& tr, const TargetRegion& target) {
    double best = 0.0;
    std::optional<double> start;
    for (const auto& s : tr.samples) {
        if (s.valid && hit_test(s.dir, target).hit) {
            if (!start) start = s.t;
            best = std::max(best, s.t - *start);
        } else {
            start.reset();
        }
    }
    return best;
}

std::vector<double> on_target_runs(const Trace& tr, const TargetRegion& target) {
    std::vector<double> runs;
    std::optional<double> start, last;
    for (const auto& s : tr.samples) {
        if (s.valid && hit_test(s.dir, target).hit) {
            if (!start) start = s.t;
            last = s.t;
        } else if (start) {
            runs.push_back(*last - *start);
            start.reset();
        }
    }
    if (start) runs.push_back(*last - *start);
    return runs;
}

}  // namespace

TEST_CASE("gen_fixation") {
    Rng rng(1);
    const auto exact = gen_fixation({4, 12}, 1.0, 0.0, 30.0, rng);
    for (const auto& s : exact) CHECK(s.dir == dir_from_angles({4, 12}));

    const auto s = gen_fixation({0, 18}, 2.5, 0.5, 30.0, rng);
    REQUIRE(s.size() == 75);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].t == doctest::Approx(i / 30.0));
        CHECK(s[i].valid);
        CHECK(is_unit(s[i].dir));
    }
    CHECK(gen_fixation({0, 0}, 0.7, 0.0, 30.0, rng).size() == 21);

    CHECK_THROWS_AS(gen_fixation({0, 0}, 0.0, 0.0, 30.0, rng), InvalidArgument);
    CHECK_THROWS_AS(gen_fixation({0, 0}, 1.0, -1.0, 30.0, rng), InvalidArgument);
}

TEST_CASE("fixation noise has a Rayleigh radial error") {
    Rng rng(2);
    const AngularPosition c{10, 18};
    const auto s = gen_fixation(c, 10000.0 / 30.0, 1.0, 30.0, rng);
    REQUIRE(s.size() == 10000);
    double sum = 0.0;
    for (const auto& x : s) sum += angular_distance(x.dir, dir_from_angles(c));
    const double mean = sum / static_cast<double>(s.size());
    const double rayleigh = std::sqrt(kPi / 2.0);  // sigma * sqrt(pi/2) with sigma = 1
    CHECK(std::abs(mean - rayleigh) / rayleigh < 0.05);
}

TEST_CASE("gen_saccade") {
    const auto still = gen_saccade({3, 3}, {3, 3}, 0.1, 30.0);
    for (const auto& s : still) CHECK(s.dir == dir_from_angles({3, 3}));

    const auto s = gen_saccade({0, 0}, {0, 18}, 0.06, 30.0);
    REQUIRE(s.size() >= 2);
    CHECK(angular_distance(s.front().dir, dir_from_angles({0, 0})) < 1e-6);
    CHECK(angular_distance(s.back().dir, dir_from_angles({0, 18})) < 1e-6);
    double peak = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        peak = std::max(peak, angular_distance(s[i].dir, s[i - 1].dir) / (s[i].t - s[i - 1].t));
    }
    CHECK(peak > 300.0);

    // at a finer rate the minimum-jerk profile peaks mid-flight
    const auto fine = gen_saccade({0, 0}, {0, 18}, 0.06, 1000.0);
    std::vector<double> v;
    for (std::size_t i = 1; i < fine.size(); ++i) v.push_back(angular_distance(fine[i].dir, fine[i - 1].dir) * 1000.0);
    const auto top = std::max_element(v.begin(), v.end()) - v.begin();
    CHECK(std::abs(static_cast<double>(top) - v.size() / 2.0) <= 2.0);
    CHECK(v.front() < 0.05 * v[top]);
    CHECK(v[top] > 300.0);

    CHECK_THROWS_AS(gen_saccade({0, 0}, {0, 18}, 0.0, 30.0), InvalidArgument);
}

TEST_CASE("an 18 degree saccade is labeled saccade by the default filter") {
    Scenario sc;
    sc.seed = 5;
    sc.segments = {Segment::fixate({0, 0}, 1.0, 0.0), Segment::saccade({0, 18}, 0.06),
                   Segment::fixate({0, 18}, 1.0, 0.0)};
    const Trace tr = gen_scenario(sc);
    const auto labels = filter_samples(tr.samples, EngineConfig{});
    // the saccade's landing sample is sample 31
    CHECK(labels[31].label == Label::Saccade);

    EngineConfig raw;
    raw.smoothing_window = 1;
    CHECK(filter_samples(tr.samples, raw)[31].label == Label::Saccade);
}

TEST_CASE("gen_scenario: continuity, metadata, determinism") {
    const Scenario s = builtin_scenario("intentional_gaze", kTarget, 0.5, 11);
    const Trace a = gen_scenario(s);
    const Trace b = gen_scenario(s);
    CHECK(a == b);
    CHECK(write_trace(a) == write_trace(b));
    CHECK(a.meta.seed == 11);
    CHECK(a.meta.rate_hz == 30.0);
    for (std::size_t i = 1; i < a.samples.size(); ++i) {
        CHECK(std::abs(a.samples[i].t - a.samples[i - 1].t - 1.0 / 30.0) < 1e-9);
    }
    // 3 s task + 2 saccade samples + 2.5 s avatar
    CHECK(a.samples.size() == 90 + 2 + 75);
    const auto spans = intentional_spans(a);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].start == doctest::Approx(3.0));
    CHECK(spans[0].end == a.samples.back().t);

    Scenario other = s;
    other.seed = 12;
    const Trace c = gen_scenario(other);
    CHECK(write_trace(c) != write_trace(a));
    CHECK(c.samples.size() == a.samples.size());
    CHECK(intentional_spans(c) == spans);

    Scenario unseeded = s;
    unseeded.seed.reset();
    CHECK_THROWS_AS(gen_scenario(unseeded), InvalidArgument);
}

TEST_CASE("casual glance trace") {
    Scenario s;
    s.seed = 3;
    s.start = kTarget.center;
    s.segments = {Segment::fixate(kTarget.center, 0.5, 0.0)};
    const Trace tr = gen_scenario(s);
    CHECK(tr.samples.size() == 15);
    CHECK(intentional_spans(tr).empty());
    CHECK(longest_on_target(tr, kTarget) < 0.5);
}

TEST_CASE("blinks, activity marks and spans") {
    Scenario s;
    s.seed = 1;
    s.segments = {Segment::fixate({0, 18}, 1.0, 0.0, true), Segment::blink(0.2, true), Segment::activity_mark(),
                  Segment::fixate({0, 18}, 1.0, 0.0, true), Segment::fixate({0, 0}, 1.0, 0.0)};
    const Trace tr = gen_scenario(s);
    for (std::size_t i = 30; i < 36; ++i) {
        CHECK_FALSE(tr.samples[i].valid);
        CHECK(tr.samples[i].dir == Vec3{0, 0, 0});
    }
    REQUIRE(activity_marks(tr).size() == 1);
    CHECK(activity_marks(tr)[0] == doctest::Approx(36.0 / 30.0));
    REQUIRE(intentional_spans(tr).size() == 1);
    CHECK(intentional_spans(tr)[0].end == doctest::Approx(65.0 / 30.0));
}

TEST_CASE("built-in scenarios") {
    const auto all = builtin_scenarios(kTarget, 0.5, 9);
    REQUIRE(all.size() == 5);
    CHECK_THROWS_AS(builtin_scenario("staring_contest", kTarget, 0.5, 1), InvalidArgument);

    SUBCASE("never_looks stays out of the target") {
        for (double noise : {0.0, 0.5, 2.0}) {
            const Trace tr = gen_scenario(builtin_scenario("never_looks", kTarget, noise, 4));
            for (const auto& s : tr.samples) CHECK_FALSE(hit_test(s.dir, kTarget).hit);
        }
    }
    SUBCASE("blink_during_dwell has one 0.1 s blink inside a 2.2 s avatar fixation") {
        const Scenario s = builtin_scenario("blink_during_dwell", kTarget, 0.5, 4);
        int blinks = 0;
        double avatar = 0.0;
        for (const auto& seg : s.segments) {
            if (seg.kind == Segment::Kind::Blink) {
                ++blinks;
                CHECK(seg.duration == doctest::Approx(0.1));
            } else if (seg.kind == Segment::Kind::Fixate && seg.target == kTarget.center) {
                avatar += seg.duration;
            }
        }
        CHECK(blinks == 1);
        CHECK(avatar + 0.1 == doctest::Approx(2.2));
        CHECK(s.segments.front().kind == Segment::Kind::Fixate);
        CHECK(s.segments.back().kind == Segment::Kind::Fixate);
    }
    SUBCASE("incidental sweeps cross the target briefly") {
        for (double noise : {0.0, 0.5, 1.0}) {
            const Trace tr = gen_scenario(builtin_scenario("task_with_incidental_sweeps", kTarget, noise, 6));
            const auto runs = on_target_runs(tr, kTarget);
            CHECK(runs.size() >= 3);
            for (double r : runs) CHECK(r < 0.2);
            CHECK(intentional_spans(tr).empty());
        }
    }
}

TEST_CASE("randomized casual glances stay on target at most 1.0 s") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const double noise = (seed % 5) * 0.5;
        const Trace tr = gen_scenario(random_variant("casual_glance", kTarget, noise, seed));
        CHECK(longest_on_target(tr, kTarget) <= 1.0 + 1e-9);
        CHECK(intentional_spans(tr).empty());
    }
}

TEST_CASE("randomized variants keep their character") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Trace never = gen_scenario(random_variant("never_looks", kTarget, 0.5, seed));
        CHECK(on_target_runs(never, kTarget).empty());
        const Trace sweeps = gen_scenario(random_variant("task_with_incidental_sweeps", kTarget, 0.0, seed));
        for (double r : on_target_runs(sweeps, kTarget)) CHECK(r < 0.2);
        const Trace look = gen_scenario(random_variant("intentional_gaze", kTarget, 0.0, seed));
        CHECK(longest_on_target(look, kTarget) >= 2.5 - 1e-9);
        CHECK(intentional_spans(look).size() == 1);
    }
}

TEST_CASE("zero-noise fixate segments are labeled fixation") {
    for (const char* name : kScenarioNames) {
        const Scenario s = builtin_scenario(name, kTarget, 0.0, 2);
        const Trace tr = gen_scenario(s);
        for (auto cls : {Classifier::None, Classifier::Velocity, Classifier::Dispersion}) {
            EngineConfig c;
            c.classifier = cls;
            c.smoothing_window = 1;
            const auto labels = filter_samples(tr.samples, c);
            std::size_t i = 0;
            for (const auto& seg : s.segments) {
                const std::size_t n = seg.kind == Segment::Kind::Saccade
                                          ? std::max<std::size_t>(2, std::llround(seg.duration * s.rate_hz))
                                          : (seg.kind == Segment::Kind::ActivityMark ? 0 : sample_count(seg.duration, s.rate_hz));
                if (seg.kind == Segment::Kind::Fixate) {
                    for (std::size_t k = i; k < i + n; ++k) CHECK(labels[k].label == Label::Fixation);
                }
                i += n;
            }
            CHECK(i == tr.samples.size());
        }
    }
}

TEST_CASE("scenario JSON round-trip and validation") {
    Scenario s = builtin_scenario("blink_during_dwell", kTarget, 0.7, 5);
    s.segments.push_back(Segment::activity_mark());
    const Json j = scenario_to_json(s);
    const Scenario back = scenario_from_json(j);
    CHECK(scenario_to_json(back) == j);
    CHECK(write_trace(gen_scenario(back)) == write_trace(gen_scenario(s)));

    CHECK_THROWS_AS(scenario_from_json(Json::parse(R"({"seed":1,"segments":[{"kind":"teleport"}]})")),
                    InvalidArgument);
    CHECK_THROWS_AS(gen_scenario(scenario_from_json(
                        Json::parse(R"({"seed":1,"segments":[{"kind":"blink","duration":0}]})"))),
                    InvalidArgument);
    CHECK_THROWS_AS(gen_scenario(scenario_from_json(Json::parse(
                        R"({"seed":1,"rate_hz":0,"segments":[{"kind":"blink","duration":1}]})"))),
                    InvalidArgument);
    const Scenario noseed = scenario_from_json(Json::parse(R"({"segments":[{"kind":"blink","duration":1}]})"));
    CHECK_FALSE(noseed.seed.has_value());
}
