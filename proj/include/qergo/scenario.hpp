#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qergo/report.hpp"

namespace qergo {

struct MeterParams {
    int n = 0;                          // 0 = auto (power of two, >= 512)
    std::optional<double> half_width;   // absent = auto from the observable
    double sigma_x = 0.5;
    double kappa = 5.0;
};

enum class ScenarioKind { single_slit, beam_splitter, stern_gerlach, identity_suite };

ScenarioKind parse_scenario_kind(const std::string& name);
std::string scenario_name(ScenarioKind kind);

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::identity_suite;
    int dim = 2;
    std::uint64_t seed = 42;
    int slit_index = 0;       // single-slit only
    MeterParams meter;
    double tol_scale = 1.0;
    int dim_max = 8;          // identity-suite only
    int seeds = 5;            // identity-suite only
    std::string out;          // empty = stdout
    ReportFormat format = ReportFormat::json;
};

// Scenario defaults: dim 32 for the single slit, 2 elsewhere; seed 42.
ScenarioConfig default_config(ScenarioKind kind);

// Parses the JSON form of ScenarioConfig. Unknown or ill-typed fields raise
// ConfigError carrying the field path.
ScenarioConfig parse_config_json(const std::string& text);

void validate_config(const ScenarioConfig& config);

RunReport run_scenario(const ScenarioConfig& config);

struct SuiteParams {
    int dim_max = 8;
    int seeds = 5;
    double tol_scale = 1.0;
    std::uint64_t seed = 42;
};

// Every module invariant as a named check, aggregated over dims and seeds,
// sorted by name.
std::vector<CheckResult> identity_suite_checks(const SuiteParams& params);

}  // namespace qergo
