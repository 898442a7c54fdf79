#pragma once

/// @file scenarios.hpp
/// @brief Canned experiments behind the command line interface: the
///        manufactured-solution convergence study, a shrinking circle
///        benchmark, a dumbbell illustrating mesh redistribution, and a
///        grain-boundary motion simulation.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "csflow/manufactured.hpp"

namespace csflow {

/// Parse a time-step rule: "h2" (dt = h^2), "0.5h" (dt = h/2), or a
/// positive number for a fixed step. Throws std::invalid_argument on
/// anything else.
std::pair<StepRule, double> parse_step_rule(const std::string& text);

const std::vector<std::string>& scenario_names();

/// Settings resolved from defaults, config file and flags. Zero, NaN or
/// empty fields mean "use the scenario default".
struct ScenarioConfig {
    std::string scenario = "convergence";
    int mesh_size = 0;
    std::string dt;
    double alpha = 0.0;
    double horizon = 0.0;
    int sweeps = 0;  // fixed-point sweeps per step; 0 = scenario default
    std::string out_dir = ".";
    bool emit_csv = true;
    bool emit_svg = true;
    bool study = false;
};

/// Run one scenario, write its artifacts into out_dir, and log a short
/// summary. Throws on unknown scenarios, bad settings, and runtime
/// failures (degenerate meshes, singular systems, unwritable files).
void run_scenario(const ScenarioConfig& config, std::ostream& log);

}  // namespace csflow
