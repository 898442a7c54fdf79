// Command line front end: resolves settings from scenario defaults, an
// optional JSON config file, and flags (flags win), then runs the scenario.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csflow/scenarios.hpp"

namespace {

int usage_error(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 2;
}

// Copies config-file values into the options that were not set on the
// command line. Returns an error message, empty on success.
std::string apply_config(const nlohmann::json& config, const CLI::App& app,
                         csflow::ScenarioConfig& out, std::vector<std::string>& emit) {
    for (const auto& [key, value] : config.items()) {
        try {
            if (key == "scenario") {
                if (!app.count("--scenario")) out.scenario = value.get<std::string>();
            } else if (key == "J") {
                if (!app.count("--J")) out.mesh_size = value.get<int>();
            } else if (key == "dt") {
                if (!app.count("--dt"))
                    out.dt = value.is_string() ? value.get<std::string>()
                                               : nlohmann::json(value).dump();
            } else if (key == "alpha") {
                if (!app.count("--alpha")) out.alpha = value.get<double>();
            } else if (key == "T") {
                if (!app.count("--T")) out.horizon = value.get<double>();
            } else if (key == "sweeps") {
                if (!app.count("--sweeps")) out.sweeps = value.get<int>();
            } else if (key == "out") {
                if (!app.count("--out")) out.out_dir = value.get<std::string>();
            } else if (key == "study") {
                if (!app.count("--study")) out.study = value.get<bool>();
            } else if (key == "emit") {
                if (!app.count("--emit")) {
                    emit.clear();
                    if (value.is_string()) {
                        emit.push_back(value.get<std::string>());
                    } else {
                        for (const auto& item : value) emit.push_back(item.get<std::string>());
                    }
                }
            } else {
                return "unknown config key '" + key + "'";
            }
        } catch (const nlohmann::json::exception&) {
            return "config key '" + key + "' has the wrong type";
        }
    }
    return {};
}

int run_main(int argc, char** argv) {
    CLI::App app{
        "csflow: finite element solver for a closed plane curve moving by\n"
        "forced curve shortening flow coupled to a reaction-diffusion\n"
        "equation on the curve"};

    csflow::ScenarioConfig config;
    std::vector<std::string> emit;
    std::string config_path;

    app.add_option("--scenario,-s", config.scenario,
                   "one of: convergence, circle, dumbbell, grain-boundary")
        ->capture_default_str();
    app.add_option("--J", config.mesh_size, "number of elements (scenario default when 0)");
    app.add_option("--dt", config.dt, "time step: h2, 0.5h, or a number");
    app.add_option("--alpha", config.alpha, "tangential motion parameter in (0, 1]");
    app.add_option("--T", config.horizon, "final time");
    app.add_option("--sweeps", config.sweeps,
                   "fixed-point sweeps per step (scenario default when 0)");
    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--emit", emit, "artifacts to write: csv, svg, none")->delimiter(',');
    app.add_flag("--study", config.study, "convergence scenario: run the full mesh sweep");
    app.add_option("--config", config_path, "JSON file with the same keys as the flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) return usage_error("cannot read config file '" + config_path + "'");
        nlohmann::json parsed;
        try {
            in >> parsed;
        } catch (const nlohmann::json::exception& e) {
            return usage_error("config file '" + config_path + "': " + e.what());
        }
        if (!parsed.is_object()) return usage_error("config file must hold a JSON object");
        std::string problem = apply_config(parsed, app, config, emit);
        if (!problem.empty()) return usage_error(problem);
    }

    const auto& names = csflow::scenario_names();
    if (std::find(names.begin(), names.end(), config.scenario) == names.end())
        return usage_error("unknown scenario '" + config.scenario +
                           "' (expected convergence, circle, dumbbell or grain-boundary)");
    if (!config.dt.empty()) {
        try {
            csflow::parse_step_rule(config.dt);
        } catch (const std::invalid_argument& e) {
            return usage_error(e.what());
        }
    }
    if (app.count("--alpha") || config.alpha != 0.0) {
        if (!(config.alpha > 0.0 && config.alpha <= 1.0))
            return usage_error("alpha must lie in (0, 1]");
    }
    if (config.mesh_size < 0 || (app.count("--J") && config.mesh_size < 3))
        return usage_error("J must be at least 3");
    if (config.sweeps < 0 || (app.count("--sweeps") && config.sweeps < 1))
        return usage_error("sweeps must be at least 1");

    if (!emit.empty()) {
        config.emit_csv = false;
        config.emit_svg = false;
        for (const std::string& kind : emit) {
            if (kind == "csv") config.emit_csv = true;
            else if (kind == "svg") config.emit_svg = true;
            else if (kind == "none") { config.emit_csv = false; config.emit_svg = false; }
            else return usage_error("unknown emit kind '" + kind + "'");
        }
    }

    csflow::run_scenario(config, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
