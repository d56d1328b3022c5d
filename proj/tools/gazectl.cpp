// gazectl: command-line front end for the gaze activation engine.
//
//   gazectl replay   <trace.jsonl> [--config cfg.json] [--dwell S]
//   gazectl simulate <scenario.json> | --builtin NAME  [--seed N] [--noise DEG] [-o out.jsonl]
//   gazectl sweep    [--config sweep.json] [--seed N] [--table]
//   gazectl compare  [--config compare.json] [--seed N] [--table]
//   gazectl serve    [--port P] [--stdio] [--config cfg.json] [--dwell S]
//
// Exit codes: 0 ok, 1 runtime failure (e.g. bind), 2 invalid input, 3 an
// evaluation invariant failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "gaze/dwell.hpp"
#include "gaze/eval.hpp"
#include "gaze/session.hpp"
#include "gaze/sim.hpp"
#include "gaze/trace.hpp"
#include "gaze/ws_server.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

gaze::Json load_json_file(const std::string& path) {
    std::string text;
    try {
        text = gaze::read_file(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    try {
        return gaze::Json::parse(text);
    } catch (const gaze::Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

// defaults < config file (--config, else $GAZE_DWELL_CONFIG) < flags
gaze::EngineConfig engine_config(const std::string& config_file, std::optional<double> dwell) {
    gaze::EngineConfig c;
    std::string path = config_file;
    if (path.empty()) {
        if (const char* env = std::getenv("GAZE_DWELL_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) c = gaze::config_from_json(load_json_file(path), c);
    if (dwell) c.dwell_threshold = *dwell;
    gaze::require_valid(c);
    return c;
}

std::uint64_t draw_seed() {
    std::random_device rd;
    return ((static_cast<std::uint64_t>(rd()) << 32) | rd()) & 0x7FFFFFFFFFFFFFFFULL;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaze-triggered assistant activation engine"};
    app.require_subcommand(1);

    std::string config_file;
    std::optional<double> dwell;
    std::optional<std::uint64_t> seed;

    auto* replay = app.add_subcommand("replay", "Run a trace through the engine and print the event log");
    std::string trace_file;
    replay->add_option("trace", trace_file, "Trace file (gaze-trace/1)")->required();
    replay->add_option("--config", config_file, "Engine config JSON");
    replay->add_option("--dwell", dwell, "Dwell threshold, seconds");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic trace from a scenario");
    std::string scenario_file;
    std::string builtin;
    std::optional<double> noise;
    std::string out_file;
    auto* scen_opt = simulate->add_option("scenario", scenario_file, "Scenario JSON file");
    auto* builtin_opt = simulate->add_option("--builtin", builtin, "Built-in scenario name");
    scen_opt->excludes(builtin_opt);
    simulate->add_option("--seed", seed, "Generator seed (drawn and recorded when absent)");
    simulate->add_option("--noise", noise, "Fixation noise sigma for --builtin, degrees (default 0.5)");
    simulate->add_option("-o,--output", out_file, "Output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Dwell-threshold sweep, CSV to stdout");
    auto* compare = app.add_subcommand("compare", "Activation channel comparison, CSV to stdout");
    bool table = false;
    for (auto* sub : {sweep, compare}) {
        sub->add_option("--config", config_file, "Sweep/compare config JSON");
        sub->add_option("--seed", seed, "Master seed");
        sub->add_flag("--table", table, "Print a text table instead of CSV");
    }

    auto* serve = app.add_subcommand("serve", "Live session service (WebSocket or --stdio)");
    int port = 8765;
    bool stdio = false;
    std::string address = "127.0.0.1";
    serve->add_option("--port", port, "TCP port (0 = any free port)");
    serve->add_option("--address", address, "Listen address");
    serve->add_flag("--stdio", stdio, "Line-delimited JSON over stdin/stdout");
    serve->add_option("--config", config_file, "Engine config JSON");
    serve->add_option("--dwell", dwell, "Dwell threshold, seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (replay->parsed()) {
            const auto config = engine_config(config_file, dwell);
            gaze::Trace trace;
            try {
                trace = gaze::load_trace_file(trace_file);
            } catch (const std::exception& e) {
                throw InputError(trace_file + ": " + e.what());
            }
            std::cout << gaze::write_event_log(gaze::run_session(trace, config));
            return 0;
        }

        if (simulate->parsed()) {
            gaze::Scenario s;
            if (!builtin.empty()) {
                s = gaze::builtin_scenario(builtin, gaze::EngineConfig{}.target, noise.value_or(0.5), 0);
                s.seed.reset();
            } else if (!scenario_file.empty()) {
                s = gaze::scenario_from_json(load_json_file(scenario_file));
            } else {
                throw InputError("simulate needs a scenario file or --builtin NAME");
            }
            if (seed) s.seed = *seed;
            if (!s.seed) s.seed = draw_seed();
            const std::string text = gaze::write_trace(gaze::gen_scenario(s));
            if (out_file.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_file, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + out_file);
                out << text;
            }
            return 0;
        }

        if (sweep->parsed()) {
            gaze::SweepSpec spec;
            if (!config_file.empty()) spec = gaze::sweep_spec_from_json(load_json_file(config_file));
            if (seed) spec.seed = *seed;
            const auto rows = gaze::sweep_threshold(spec);
            std::cout << (table ? gaze::sweep_table(rows) : gaze::sweep_csv(rows));
            const auto problems = gaze::check_sweep(rows);
            for (const auto& p : problems) std::cerr << "gazectl: sweep invariant violated: " << p << '\n';
            return problems.empty() ? 0 : kExitInvariant;
        }

        if (compare->parsed()) {
            gaze::CompareSpec spec = gaze::CompareSpec::defaults();
            if (!config_file.empty()) spec = gaze::compare_spec_from_json(load_json_file(config_file));
            if (seed) spec.seed = *seed;
            const auto rows = gaze::compare_channels(spec);
            std::cout << (table ? gaze::compare_table(rows) : gaze::compare_csv(rows));
            return 0;
        }

        if (serve->parsed()) {
            const auto config = engine_config(config_file, dwell);
            if (stdio) {
                gaze::run_stdio(std::cin, std::cout, config);
                return 0;
            }
            if (port < 0 || port > 65535) throw InputError("port out of range");
            gaze::WsServer server(address, static_cast<std::uint16_t>(port), config);
            std::cerr << "gazectl: listening on ws://" << address << ':' << server.port() << '\n';
            server.run();
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitInput;
    } catch (const gaze::ParseError& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitInput;
    } catch (const gaze::ValidationError& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitInput;
    } catch (const gaze::InvalidArgument& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitInput;
    } catch (const gaze::Json::exception& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "gazectl: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
