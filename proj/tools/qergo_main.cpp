#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qergo/errors.hpp"
#include "qergo/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qergo::IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int emit(const qergo::RunReport& report, const qergo::ScenarioConfig& config) {
    std::string body = qergo::emit_report(report, config.format);
    if (config.out.empty()) {
        std::cout << body;
        if (!body.empty() && body.back() != '\n') std::cout << '\n';
    } else {
        qergo::write_report_file(report, config.format, config.out);
        int passed = 0;
        for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
        std::cout << "wrote " << config.out << " (" << passed << '/' << report.checks.size()
                  << " checks passed)\n";
    }
    return qergo::all_pass(report) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qergo: complex joint probabilities, ergodic phase randomization and "
                 "meter-based state preparation on finite Hilbert spaces"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a scenario and emit a report");
    std::string scenario_name, config_path, out, format = "json";
    int dim = 0, slit_index = -1, meter_n = -1;
    std::uint64_t seed = 0;
    bool seed_set = false, dim_set = false;
    double meter_l = 0.0, meter_sigma_x = 0.0, meter_kappa = -1.0, tol_scale = 0.0;
    run->add_option("--scenario", scenario_name,
                    "single-slit | beam-splitter | stern-gerlach | identity-suite");
    run->add_option("--config", config_path, "JSON config file; flags override its fields");
    run->add_option("--dim", dim, "Hilbert space dimension");
    run->add_option("--seed", seed, "Random seed (default 42)");
    run->add_option("--slit-index", slit_index, "Slit position (single-slit)");
    run->add_option("--out", out, "Report output path (default: stdout)");
    run->add_option("--format", format, "json | csv | text")->capture_default_str();
    run->add_option("--meter-n", meter_n, "Meter grid points (0 = auto)");
    run->add_option("--meter-L", meter_l, "Meter grid half-width (0 = auto)");
    run->add_option("--meter-sigma-x", meter_sigma_x, "Meter position spread");
    run->add_option("--meter-kappa", meter_kappa, "Meter coupling");
    run->add_option("--tol-scale", tol_scale, "Tolerance multiplier");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the full identity suite");
    int dim_max = 8, n_seeds = 5;
    double v_tol_scale = 1.0;
    std::uint64_t v_seed = 42;
    std::string v_out, v_format = "json";
    verify->add_option("--dim-max", dim_max, "Largest dimension swept")->capture_default_str();
    verify->add_option("--seeds", n_seeds, "Seeds per case")->capture_default_str();
    verify->add_option("--tol-scale", v_tol_scale, "Tolerance multiplier")->capture_default_str();
    verify->add_option("--seed", v_seed, "Base seed")->capture_default_str();
    verify->add_option("--out", v_out, "Report output path (default: stdout)");
    verify->add_option("--format", v_format, "json | csv | text")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        qergo::ScenarioConfig config;
        if (run->parsed()) {
            if (!config_path.empty()) {
                config = qergo::parse_config_json(slurp(config_path));
            } else if (!scenario_name.empty()) {
                config = qergo::default_config(qergo::parse_scenario_kind(scenario_name));
            } else {
                throw qergo::ConfigError("scenario: pass --scenario or --config");
            }
            if (!scenario_name.empty()) {
                config.scenario = qergo::parse_scenario_kind(scenario_name);
            }
            dim_set = run->count("--dim") > 0;
            seed_set = run->count("--seed") > 0;
            if (dim_set) config.dim = dim;
            if (seed_set) config.seed = seed;
            if (run->count("--slit-index")) config.slit_index = slit_index;
            if (run->count("--out")) config.out = out;
            if (run->count("--format")) config.format = qergo::parse_report_format(format);
            if (run->count("--meter-n")) config.meter.n = meter_n;
            if (run->count("--meter-L")) {
                if (meter_l > 0.0) config.meter.half_width = meter_l;
                else config.meter.half_width.reset();
            }
            if (run->count("--meter-sigma-x")) config.meter.sigma_x = meter_sigma_x;
            if (run->count("--meter-kappa")) config.meter.kappa = meter_kappa;
            if (run->count("--tol-scale")) config.tol_scale = tol_scale;
        } else {
            config = qergo::default_config(qergo::ScenarioKind::identity_suite);
            config.dim_max = dim_max;
            config.seeds = n_seeds;
            config.tol_scale = v_tol_scale;
            config.seed = v_seed;
            config.out = v_out;
            config.format = qergo::parse_report_format(v_format);
        }
        qergo::validate_config(config);
        return emit(qergo::run_scenario(config), config);
    } catch (const qergo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
