#include "qergo/scenario.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>

#include "qergo/causality.hpp"
#include "qergo/ergodic.hpp"
#include "qergo/hilbert.hpp"
#include "qergo/meter.hpp"
#include "qergo/quasiprob.hpp"

namespace qergo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError(prefix + key + ": unknown field");
    }
}

template <typename T>
T field_as(const json& obj, const char* key, T fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + ": invalid value");
    }
}

Observable spin_half(const std::string& up, const std::string& down) {
    Matrix cols = Matrix::Identity(2, 2);
    Eigen::VectorXd vals(2);
    vals << 0.5, -0.5;
    return Observable(BasisSet({up, down}, cols), vals);
}

MeterModel meter_from_params(const MeterParams& p, const Observable& obs) {
    return MeterModel::auto_gaussian(obs, p.sigma_x, p.kappa, p.n,
                                     p.half_width.value_or(0.0));
}

RunReport run_single_slit(const ScenarioConfig& config) {
    RunReport report;
    report.scenario = scenario_name(config.scenario);
    const int d = config.dim;
    const int q = config.slit_index;
    const double ts = config.tol_scale;

    // Position observable: centered unit-spaced eigenvalues on the standard basis.
    BasisSet position = build_basis(BasisKind::standard, d);
    Eigen::VectorXd values(d);
    for (int j = 0; j < d; ++j) values[j] = j - 0.5 * (d - 1);
    Observable x_obs(position, values);
    BasisSet momentum = build_basis(BasisKind::fourier, d);

    // Incoming plane wave: the zero-momentum column, uniform over the slits.
    PureState input(momentum.column(0));
    MeterModel meter = meter_from_params(config.meter, x_obs);
    std::string label = position.label(q);

    PreparationOutcome prep = prepare_by_measurement(input, x_obs, meter, label);
    report.checks.push_back(
        make_check("slit.branch_probability", prep.probability, 1.0 / d, 1e-3 * ts));
    report.checks.push_back(make_check("slit.prepared_fidelity", prep.fidelity, 1.0, 1e-3 * ts));

    // Projectively selected branch: momentum statistics are exactly uniform.
    PreparedState exact = prepare_state(DensityOperator(input), x_obs, label);
    Eigen::VectorXd p_exact = born_distribution(exact.rho_out, momentum);
    CheckResult mom;
    mom.name = "slit.momentum_uniformity";
    mom.tolerance = 1e-10 * ts;
    for (int k = 0; k < d; ++k) {
        mom.values.push_back(p_exact[k]);
        mom.references.push_back(1.0 / d);
        mom.deviation = std::max(mom.deviation, std::abs(p_exact[k] - 1.0 / d));
    }
    mom.pass = mom.deviation <= mom.tolerance;
    report.checks.push_back(std::move(mom));

    // The meter-conditioned branch reproduces the same distribution at
    // read-out precision.
    Eigen::VectorXd p_meter = born_distribution(DensityOperator(prep.state), momentum);
    double dev = 0.0;
    for (int k = 0; k < d; ++k) dev = std::max(dev, std::abs(p_meter[k] - 1.0 / d));
    report.checks.push_back(
        make_max_deviation_check("slit.meter_momentum_uniformity", dev, 1e-3 * ts));
    return report;
}

RunReport run_beam_splitter(const ScenarioConfig& config) {
    RunReport report;
    report.scenario = scenario_name(config.scenario);
    const double ts = config.tol_scale;

    Observable polarization = spin_half("H", "V");
    Vector circ(2);
    circ << cx(1.0, 0.0), cx(0.0, 1.0);
    PureState input(circ / std::sqrt(2.0));

    MeterModel meter = meter_from_params(config.meter, polarization);
    PreparationOutcome prep = prepare_by_measurement(input, polarization, meter, "H");

    report.checks.push_back(
        make_check("beamsplitter.branch_probability", prep.probability, 0.5, 1e-3 * ts));
    report.checks.push_back(
        make_check("beamsplitter.prepared_fidelity", prep.fidelity, 1.0, 1e-3 * ts));

    BasisSet diagonal = build_basis(BasisKind::fourier, 2);
    Eigen::VectorXd p = born_distribution(DensityOperator(prep.state), diagonal);
    double dev = std::max(std::abs(p[0] - 0.5), std::abs(p[1] - 0.5));
    report.checks.push_back(
        make_max_deviation_check("beamsplitter.diagonal_distribution", dev, 1e-3 * ts));
    return report;
}

RunReport run_stern_gerlach(const ScenarioConfig& config) {
    RunReport report;
    report.scenario = scenario_name(config.scenario);
    const double ts = config.tol_scale;
    const double kappa = config.meter.kappa;
    const double sigma_x = config.meter.sigma_x;

    Observable spin = spin_half("up", "down");
    Vector plus(2);
    plus << 1.0, 1.0;
    PureState input(plus / std::sqrt(2.0));

    MeterModel meter = meter_from_params(config.meter, spin);
    JointState joint = interact(input, meter, spin);
    DensityOperator reduced = reduce_system(joint);

    // Momentum spread of the minimal-uncertainty packet.
    double sigma_p = 1.0 / (2.0 * sigma_x);
    double gap = spin.min_gap();
    double predicted = 0.5 * std::exp(-0.5 * kappa * kappa * sigma_p * sigma_p * gap * gap);
    double coherence = std::abs(reduced.matrix()(0, 1));
    report.checks.push_back(
        make_check("sterngerlach.residual_coherence", coherence, predicted, 1e-8 * ts));

    PhaseAverageResult channel = phase_average_channel(
        DensityOperator(input), spin, PhaseDistribution::gaussian(kappa * sigma_p));
    double dev = (channel.rho.matrix() - reduced.matrix()).cwiseAbs().maxCoeff();
    report.checks.push_back(
        make_max_deviation_check("sterngerlach.channel_equivalence", dev, 1e-8 * ts));

    PreparationOutcome prep = prepare_by_measurement(input, spin, meter, "up");
    report.checks.push_back(
        make_check("sterngerlach.branch_probability", prep.probability, 0.5, 1e-3 * ts));
    report.checks.push_back(
        make_check("sterngerlach.conditional_fidelity", prep.fidelity, 1.0, 1e-3 * ts));
    return report;
}

}  // namespace

ScenarioKind parse_scenario_kind(const std::string& name) {
    if (name == "single-slit") return ScenarioKind::single_slit;
    if (name == "beam-splitter") return ScenarioKind::beam_splitter;
    if (name == "stern-gerlach") return ScenarioKind::stern_gerlach;
    if (name == "identity-suite") return ScenarioKind::identity_suite;
    throw ConfigError("scenario: unknown scenario '" + name + "'");
}

std::string scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::single_slit: return "single-slit";
        case ScenarioKind::beam_splitter: return "beam-splitter";
        case ScenarioKind::stern_gerlach: return "stern-gerlach";
        case ScenarioKind::identity_suite: return "identity-suite";
    }
    return "unknown";
}

ScenarioConfig default_config(ScenarioKind kind) {
    ScenarioConfig c;
    c.scenario = kind;
    if (kind == ScenarioKind::single_slit) c.dim = 32;
    return c;
}

ScenarioConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(root,
                   {"scenario", "dim", "seed", "slit_index", "meter", "tolerances", "dim_max",
                    "seeds", "out", "format"},
                   "");

    if (!root.contains("scenario")) throw ConfigError("scenario: required");
    ScenarioConfig config = default_config(parse_scenario_kind(
        field_as<std::string>(root, "scenario", "", "scenario")));
    config.dim = field_as<int>(root, "dim", config.dim, "dim");
    config.seed = field_as<std::uint64_t>(root, "seed", config.seed, "seed");
    config.slit_index = field_as<int>(root, "slit_index", config.slit_index, "slit_index");
    config.dim_max = field_as<int>(root, "dim_max", config.dim_max, "dim_max");
    config.seeds = field_as<int>(root, "seeds", config.seeds, "seeds");
    config.out = field_as<std::string>(root, "out", config.out, "out");
    config.format =
        parse_report_format(field_as<std::string>(root, "format", "json", "format"));

    if (root.contains("meter")) {
        const json& m = root.at("meter");
        if (!m.is_object()) throw ConfigError("meter: must be an object");
        reject_unknown(m, {"n", "L", "sigma_x", "kappa"}, "meter.");
        config.meter.n = field_as<int>(m, "n", config.meter.n, "meter.n");
        if (m.contains("L") && !(m.at("L").is_string() && m.at("L") == "auto")) {
            config.meter.half_width = field_as<double>(m, "L", 0.0, "meter.L");
        }
        config.meter.sigma_x = field_as<double>(m, "sigma_x", config.meter.sigma_x, "meter.sigma_x");
        config.meter.kappa = field_as<double>(m, "kappa", config.meter.kappa, "meter.kappa");
    }
    if (root.contains("tolerances")) {
        const json& t = root.at("tolerances");
        if (!t.is_object()) throw ConfigError("tolerances: must be an object");
        reject_unknown(t, {"tol_scale"}, "tolerances.");
        config.tol_scale = field_as<double>(t, "tol_scale", 1.0, "tolerances.tol_scale");
    }
    validate_config(config);
    return config;
}

void validate_config(const ScenarioConfig& config) {
    if (config.dim < 1) throw ConfigError("dim: must be >= 1");
    if (!(config.tol_scale > 0.0)) throw ConfigError("tolerances.tol_scale: must be > 0");
    if (config.meter.n != 0 && config.meter.n < 2) throw ConfigError("meter.n: must be >= 2");
    if (!(config.meter.sigma_x > 0.0)) throw ConfigError("meter.sigma_x: must be > 0");
    if (!(config.meter.kappa >= 0.0)) throw ConfigError("meter.kappa: must be >= 0");
    if (config.meter.half_width && !(*config.meter.half_width > 0.0)) {
        throw ConfigError("meter.L: must be > 0 or \"auto\"");
    }
    switch (config.scenario) {
        case ScenarioKind::single_slit:
            if (config.dim < 2) throw ConfigError("dim: single-slit needs dim >= 2");
            if (config.slit_index < 0 || config.slit_index >= config.dim) {
                throw ConfigError("slit_index: must lie in [0, dim)");
            }
            break;
        case ScenarioKind::beam_splitter:
        case ScenarioKind::stern_gerlach:
            if (config.dim != 2) throw ConfigError("dim: scenario is qubit-only (dim = 2)");
            break;
        case ScenarioKind::identity_suite:
            if (config.dim_max < 2) throw ConfigError("dim_max: must be >= 2");
            if (config.seeds < 1) throw ConfigError("seeds: must be >= 1");
            break;
    }
}

RunReport run_scenario(const ScenarioConfig& config) {
    validate_config(config);
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    switch (config.scenario) {
        case ScenarioKind::single_slit: report = run_single_slit(config); break;
        case ScenarioKind::beam_splitter: report = run_beam_splitter(config); break;
        case ScenarioKind::stern_gerlach: report = run_stern_gerlach(config); break;
        case ScenarioKind::identity_suite: {
            report.scenario = scenario_name(config.scenario);
            report.checks = identity_suite_checks(
                {config.dim_max, config.seeds, config.tol_scale, config.seed});
            break;
        }
    }
    sort_checks(report);
    report.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

}  // namespace qergo
