#include "gaze/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "gaze/dwell.hpp"
#include "gaze/geometry.hpp"
#include "gaze/rng.hpp"
#include "gaze/sim.hpp"

namespace gaze {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double nominal_duration(const Scenario& s) {
    double d = 0.0;
    for (const auto& seg : s.segments) d += seg.duration;
    return d;
}

}  // namespace

std::vector<double> oracle_activations(const Trace& trace, const EngineConfig& c) {
    require_valid(c);
    validate_trace(trace);

    const auto& raw = trace.samples;
    const std::size_t n = raw.size();
    std::vector<double> t(n);
    std::vector<bool> valid(n);
    std::vector<Vec3> dir(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = raw[i].t;
        valid[i] = raw[i].valid;
        dir[i] = raw[i].dir;
    }

    std::vector<bool> on(n, false);
    for (std::size_t i = 0; i < n; ++i) on[i] = valid[i] && hit_test(dir[i], c.target).hit;

    auto marks = activity_marks(trace);
    std::sort(marks.begin(), marks.end());

    std::vector<double> activations;
    std::size_t from = 0;
    while (from < n) {
        std::size_t a = from;
        while (a < n && !on[a]) ++a;
        if (a >= n) break;

        // Scan one grace-bridged span; accum holds the on-target time of its
        // completed runs.
        double accum = 0.0;
        std::optional<std::size_t> fire;
        std::size_t next_from = n;
        for (;;) {
            std::size_t b = a;
            while (b + 1 < n && on[b + 1]) ++b;
            const double run = t[b] - t[a];
            if (accum + run >= c.dwell_threshold - kTimeEps) {
                const double instant = t[a] + (c.dwell_threshold - accum);
                std::size_t m = a;
                while (m < b && t[m] < instant - kTimeEps) ++m;
                fire = m;
                break;
            }
            accum += run;
            const std::size_t first_bad = b + 1;
            if (first_bad >= n) break;
            std::size_t g = first_bad;
            while (g < n && !on[g]) ++g;
            if (g >= n) break;
            if (t[g] - t[first_bad] <= c.grace_period + kTimeEps) {
                a = g;
                continue;
            }
            next_from = g;
            break;
        }
        if (!fire) {
            from = next_from;
            continue;
        }

        const double ta = t[*fire];
        activations.push_back(ta);

        // Interaction mode lasts until a sample more than interaction_timeout
        // after the last activity; the cooldown then runs from that sample.
        auto mark = std::upper_bound(marks.begin(), marks.end(), ta);
        double last_activity = ta;
        std::size_t q = *fire + 1;
        for (; q < n; ++q) {
            while (mark != marks.end() && *mark <= t[q]) last_activity = std::max(last_activity, *mark++);
            if (t[q] - last_activity > c.interaction_timeout) break;
        }
        if (q >= n) break;
        std::size_t r = q;
        while (r < n && t[r] - t[q] < c.cooldown - kTimeEps) ++r;
        from = r;
    }
    return activations;
}

TrialMetrics run_trial(const Trace& trace, const EngineConfig& config, const std::vector<Span>& ground_truth) {
    TrialMetrics m;
    m.intentional_episodes = static_cast<int>(ground_truth.size());
    if (!trace.samples.empty()) {
        const double step = trace.meta.rate_hz ? 1.0 / *trace.meta.rate_hz : 0.0;
        m.duration = trace.samples.back().t - trace.samples.front().t + step;
    }

    std::vector<bool> covered(ground_truth.size(), false);
    double dwell_start = 0.0;
    for (const auto& e : run_session(trace, config)) {
        if (e.kind == EventKind::DwellStarted) dwell_start = e.t;
        if (e.kind != EventKind::Activated) continue;

        ++m.activations;
        std::optional<std::size_t> episode;
        for (std::size_t i = 0; i < ground_truth.size(); ++i) {
            if (e.t >= ground_truth[i].start - kTimeEps && e.t <= ground_truth[i].end + kTimeEps) episode = i;
        }
        if (episode && !covered[*episode]) {
            covered[*episode] = true;
            ++m.true_activations;
            m.dwell_latencies.push_back(e.t - dwell_start);
            m.intent_latencies.push_back(e.t - ground_truth[*episode].start);
        } else {
            ++m.false_activations;
        }
    }
    m.misses = static_cast<int>(std::count(covered.begin(), covered.end(), false));
    return m;
}

std::vector<SweepRow> sweep_threshold(const SweepSpec& spec, Execution exec) {
    if (spec.repetitions < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
    if (spec.thresholds.empty() || spec.noise_levels.empty() || spec.scenarios.empty()) {
        throw InvalidArgument("sweep: thresholds, noise levels and scenarios must be non-empty");
    }
    std::vector<EngineConfig> configs;
    for (double th : spec.thresholds) {
        EngineConfig c = spec.base;
        c.dwell_threshold = th;
        require_valid(c);
        configs.push_back(c);
    }

    std::vector<TrialJob> jobs;
    for (std::size_t ni = 0; ni < spec.noise_levels.size(); ++ni) {
        for (int r = 0; r < spec.repetitions; ++r) {
            for (std::size_t k = 0; k < spec.scenarios.size(); ++k) {
                const auto seed = derive_seed(spec.seed, {ni, static_cast<std::uint64_t>(r), k});
                jobs.push_back({builtin_scenario(spec.scenarios[k], spec.base.target, spec.noise_levels[ni], seed),
                                configs});
            }
        }
    }
    const auto results = evaluate_trials(jobs, exec);

    const std::size_t per_noise = static_cast<std::size_t>(spec.repetitions) * spec.scenarios.size();
    std::vector<SweepRow> rows;
    for (std::size_t ti = 0; ti < spec.thresholds.size(); ++ti) {
        for (std::size_t ni = 0; ni < spec.noise_levels.size(); ++ni) {
            long falses = 0, misses = 0, episodes = 0;
            std::vector<double> lat;
            for (std::size_t j = ni * per_noise; j < (ni + 1) * per_noise; ++j) {
                const auto& m = results[j][ti];
                falses += m.false_activations;
                misses += m.misses;
                episodes += m.intentional_episodes;
                lat.insert(lat.end(), m.dwell_latencies.begin(), m.dwell_latencies.end());
            }
            SweepRow row;
            row.threshold = spec.thresholds[ti];
            row.noise = spec.noise_levels[ni];
            row.false_rate = static_cast<double>(falses) / static_cast<double>(per_noise);
            row.miss_rate = episodes ? static_cast<double>(misses) / static_cast<double>(episodes) : 0.0;
            row.mean_latency = mean_of(lat);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<std::string> check_sweep(const std::vector<SweepRow>& rows) {
    std::map<double, std::vector<SweepRow>> by_noise;
    for (const auto& r : rows) by_noise[r.noise].push_back(r);

    std::vector<std::string> problems;
    constexpr double tol = 1e-12;
    for (auto& [noise, group] : by_noise) {
        std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.threshold < b.threshold; });
        for (std::size_t i = 1; i < group.size(); ++i) {
            const auto& lo = group[i - 1];
            const auto& hi = group[i];
            const std::string where =
                "noise " + fmt_num(noise) + ", threshold " + fmt_num(lo.threshold) + " -> " + fmt_num(hi.threshold);
            if (hi.false_rate > lo.false_rate + tol) problems.push_back(where + ": false_rate increases");
            if (hi.miss_rate < lo.miss_rate - tol) problems.push_back(where + ": miss_rate decreases");
            if (!std::isnan(lo.mean_latency) && !std::isnan(hi.mean_latency) &&
                hi.mean_latency < lo.mean_latency - tol) {
                problems.push_back(where + ": mean_latency decreases");
            }
        }
    }
    return problems;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "threshold,noise,false_rate,miss_rate,mean_latency\n";
    for (const auto& r : rows) {
        out += fmt_num(r.threshold) + ',' + fmt_num(r.noise) + ',' + fmt_num(r.false_rate) + ',' +
               fmt_num(r.miss_rate) + ',' + fmt_num(r.mean_latency) + '\n';
    }
    return out;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%9s %7s %10s %9s %12s\n", "threshold", "noise", "false_rate", "miss_rate",
                  "mean_latency");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%9.2f %7.2f %10.4f %9.4f %12s\n", r.threshold, r.noise, r.false_rate,
                      r.miss_rate, fmt_num(r.mean_latency).c_str());
        os << buf;
    }
    return os.str();
}

// ---- channel comparison ----------------------------------------------------

ChannelModel ChannelModel::gaze_channel(const EngineConfig& c) {
    ChannelModel m;
    m.kind = Kind::Gaze;
    m.gaze = c;
    return m;
}

ChannelModel ChannelModel::wake_word(double p_miss, double false_rate, double utterance) {
    ChannelModel m;
    m.kind = Kind::WakeWord;
    m.p_miss = p_miss;
    m.false_rate = false_rate;
    m.utterance = utterance;
    return m;
}

ChannelModel ChannelModel::button(double reach, double hands_busy_miss) {
    ChannelModel m;
    m.kind = Kind::Button;
    m.reach = reach;
    m.hands_busy_miss = hands_busy_miss;
    return m;
}

std::string to_string(ChannelModel::Kind k) {
    switch (k) {
    case ChannelModel::Kind::Gaze: return "gaze";
    case ChannelModel::Kind::WakeWord: return "wake_word";
    case ChannelModel::Kind::Button: return "button";
    }
    return "gaze";
}

void validate_channel(const ChannelModel& m) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    switch (m.kind) {
    case ChannelModel::Kind::Gaze: require_valid(m.gaze); break;
    case ChannelModel::Kind::WakeWord:
        if (!prob(m.p_miss)) throw InvalidArgument("wake_word: p_miss must be in [0, 1]");
        if (!(m.false_rate >= 0.0)) throw InvalidArgument("wake_word: false_rate must be >= 0");
        if (!(m.utterance >= 0.0)) throw InvalidArgument("wake_word: utterance must be >= 0");
        break;
    case ChannelModel::Kind::Button:
        if (!prob(m.hands_busy_miss)) throw InvalidArgument("button: hands_busy_miss must be in [0, 1]");
        if (!(m.reach >= 0.0)) throw InvalidArgument("button: reach must be >= 0");
        break;
    }
}

CompareSpec CompareSpec::defaults() {
    CompareSpec s;
    s.channels = {ChannelModel::gaze_channel(), ChannelModel::wake_word(0.1, 2.0, 0.8), ChannelModel::button(1.2, 0.3)};
    return s;
}

namespace {

CompareRow compare_gaze(const CompareSpec& spec, std::size_t ci, const ChannelModel& m, Execution exec) {
    const TargetRegion target = m.gaze.target;
    std::vector<TrialJob> jobs;
    for (int k = 0; k < spec.episodes; ++k) {
        jobs.push_back({random_variant("intentional_gaze", target, spec.noise,
                                       derive_seed(spec.seed, {ci, 0, static_cast<std::uint64_t>(k)})),
                        {m.gaze}});
    }
    // Background use: non-intentional scripts until the session length is covered.
    const char* background[] = {"casual_glance", "task_with_incidental_sweeps", "never_looks"};
    double covered = 0.0;
    for (std::uint64_t k = 0; covered < spec.session_hours * 3600.0; ++k) {
        Scenario s = random_variant(background[k % 3], target, spec.noise, derive_seed(spec.seed, {ci, 1, k}));
        covered += nominal_duration(s);
        jobs.push_back({std::move(s), {m.gaze}});
    }
    const auto results = evaluate_trials(jobs, exec);

    long misses = 0, falses = 0;
    double seconds = 0.0;
    std::vector<double> lat;
    for (const auto& r : results) {
        const auto& t = r.front();
        misses += t.misses;
        falses += t.false_activations;
        seconds += t.duration;
        lat.insert(lat.end(), t.intent_latencies.begin(), t.intent_latencies.end());
    }
    CompareRow row;
    row.channel = "gaze";
    row.miss_rate = static_cast<double>(misses) / static_cast<double>(spec.episodes);
    row.false_per_hour = static_cast<double>(falses) / (seconds / 3600.0);
    row.mean_latency = mean_of(lat);
    row.hands_free = true;
    row.silent = true;
    return row;
}

}  // namespace

std::vector<CompareRow> compare_channels(const CompareSpec& spec, Execution exec) {
    if (spec.episodes < 1) throw InvalidArgument("compare: episodes must be >= 1");
    if (!(spec.session_hours > 0.0)) throw InvalidArgument("compare: session_hours must be > 0");
    for (const auto& m : spec.channels) validate_channel(m);

    std::vector<CompareRow> rows;
    for (std::size_t ci = 0; ci < spec.channels.size(); ++ci) {
        const auto& m = spec.channels[ci];
        if (m.kind == ChannelModel::Kind::Gaze) {
            rows.push_back(compare_gaze(spec, ci, m, exec));
            continue;
        }
        Rng rng(derive_seed(spec.seed, {ci}));
        CompareRow row;
        row.channel = to_string(m.kind);
        long misses = 0;
        const double p = m.kind == ChannelModel::Kind::WakeWord ? m.p_miss : m.hands_busy_miss;
        for (int k = 0; k < spec.episodes; ++k) misses += rng.bernoulli(p) ? 1 : 0;
        row.miss_rate = static_cast<double>(misses) / static_cast<double>(spec.episodes);
        if (m.kind == ChannelModel::Kind::WakeWord) {
            row.false_per_hour = static_cast<double>(rng.poisson(m.false_rate * spec.session_hours)) / spec.session_hours;
            row.mean_latency = m.utterance;
            row.hands_free = true;
            row.silent = false;
        } else {
            row.false_per_hour = 0.0;
            row.mean_latency = m.reach;
            row.hands_free = false;
            row.silent = true;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "channel,miss_rate,false_per_hour,mean_latency,hands_free,silent\n";
    for (const auto& r : rows) {
        out += r.channel + ',' + fmt_num(r.miss_rate) + ',' + fmt_num(r.false_per_hour) + ',' +
               fmt_num(r.mean_latency) + ',' + (r.hands_free ? "true" : "false") + ',' + (r.silent ? "true" : "false") +
               '\n';
    }
    return out;
}

std::string compare_table(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %9s %14s %12s %10s %6s\n", "channel", "miss_rate", "false_per_hour",
                  "mean_latency", "hands_free", "silent");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-10s %9.4f %14.4f %12s %10s %6s\n", r.channel.c_str(), r.miss_rate,
                      r.false_per_hour, fmt_num(r.mean_latency).c_str(), r.hands_free ? "yes" : "no",
                      r.silent ? "yes" : "no");
        os << buf;
    }
    return os.str();
}

// ---- config files ----------------------------------------------------------

namespace {

std::vector<double> number_list(const Json& j, const char* key) {
    if (!j.is_array()) throw InvalidArgument(std::string(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw InvalidArgument(std::string(key) + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::uint64_t seed_value(const Json& j) {
    if (!j.is_number_integer()) throw InvalidArgument("seed must be an integer");
    return j.get<std::uint64_t>();
}

}  // namespace

SweepSpec sweep_spec_from_json(const Json& j, SweepSpec base) {
    if (!j.is_object()) throw InvalidArgument("sweep config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "thresholds") base.thresholds = number_list(v, "thresholds");
        else if (k == "noise") base.noise_levels = number_list(v, "noise");
        else if (k == "repetitions") {
            if (!v.is_number_integer()) throw InvalidArgument("repetitions must be an integer");
            base.repetitions = v.get<int>();
        } else if (k == "seed") base.seed = seed_value(v);
        else if (k == "scenarios") {
            base.scenarios.clear();
            for (const auto& s : v) {
                const auto name = s.get<std::string>();
                builtin_scenario(name, base.base.target, 0.0, 0);  // rejects unknown names
                base.scenarios.push_back(name);
            }
        } else if (k == "config") base.base = config_from_json(v, base.base);
        else throw InvalidArgument("unknown sweep config key " + k);
    }
    return base;
}

CompareSpec compare_spec_from_json(const Json& j, CompareSpec base) {
    if (!j.is_object()) throw InvalidArgument("compare config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "episodes") {
            if (!v.is_number_integer()) throw InvalidArgument("episodes must be an integer");
            base.episodes = v.get<int>();
        } else if (k == "session_hours") base.session_hours = v.get<double>();
        else if (k == "noise") base.noise = v.get<double>();
        else if (k == "seed") base.seed = seed_value(v);
        else if (k == "channels") {
            base.channels.clear();
            for (const auto& c : v) {
                const auto kind = c.at("kind").get<std::string>();
                if (kind == "gaze") {
                    base.channels.push_back(
                        ChannelModel::gaze_channel(config_from_json(c.value("config", Json::object()))));
                } else if (kind == "wake_word") {
                    base.channels.push_back(ChannelModel::wake_word(
                        c.at("p_miss").get<double>(), c.at("false_rate").get<double>(), c.at("utterance").get<double>()));
                } else if (kind == "button") {
                    base.channels.push_back(
                        ChannelModel::button(c.at("reach").get<double>(), c.at("hands_busy_miss").get<double>()));
                } else {
                    throw InvalidArgument("unknown channel kind " + kind);
                }
            }
        } else {
            throw InvalidArgument("unknown compare config key " + k);
        }
    }
    return base;
}

}  // namespace gaze
