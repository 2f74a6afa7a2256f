#include <doctest.h>

#include <cmath>

#include "qergo/errors.hpp"
#include "qergo/scenario.hpp"

using namespace qergo;

TEST_CASE("emit_report json for an empty report") {
    RunReport report;
    report.scenario = "beam-splitter";
    CHECK(emit_report(report, ReportFormat::json) ==
          "{\"schema_version\":1,\"scenario\":\"beam-splitter\",\"checks\":[]}");
}

TEST_CASE("emit_report csv row for a passing check") {
    RunReport report;
    report.scenario = "x";
    report.checks.push_back(make_check("alpha", 0.5, 0.5, 1e-3));
    std::string csv = emit_report(report, ReportFormat::csv);
    CHECK(csv == "name,value,reference,deviation,pass\nalpha,0.5,0.5,0,true\n");
}

TEST_CASE("emit_report is deterministic and format-complete") {
    RunReport report;
    report.scenario = "x";
    report.checks.push_back(make_check("a", 1.0 / 3.0, 0.3333, 1e-2));
    report.checks.push_back(make_max_deviation_check("b", 5e-11, 1e-10));
    report.duration_ms = 12.5;
    CHECK(emit_report(report, ReportFormat::json) == emit_report(report, ReportFormat::json));
    // Duration shows up only in the text rendering.
    CHECK(emit_report(report, ReportFormat::json).find("12.5") == std::string::npos);
    CHECK(emit_report(report, ReportFormat::text).find("duration_ms") != std::string::npos);
    CHECK(emit_report(report, ReportFormat::json).find("\"tolerance\":") != std::string::npos);
}

TEST_CASE("write_report_file rejects unwritable paths") {
    RunReport report;
    report.scenario = "x";
    CHECK_THROWS_AS(write_report_file(report, ReportFormat::json, "/nonexistent-dir/r.json"),
                    IoError);
}

TEST_CASE("parse_report_format") {
    CHECK(parse_report_format("json") == ReportFormat::json);
    CHECK(parse_report_format("csv") == ReportFormat::csv);
    CHECK(parse_report_format("text") == ReportFormat::text);
    CHECK_THROWS_AS(parse_report_format("yaml"), ConfigError);
}

TEST_CASE("parse_config_json round-trip") {
    ScenarioConfig config = parse_config_json(R"({
        "scenario": "single-slit",
        "dim": 16,
        "seed": 7,
        "slit_index": 3,
        "meter": {"n": 1024, "L": "auto", "sigma_x": 0.4, "kappa": 6.0},
        "tolerances": {"tol_scale": 2.0},
        "out": "report.json",
        "format": "csv"
    })");
    CHECK(config.scenario == ScenarioKind::single_slit);
    CHECK(config.dim == 16);
    CHECK(config.seed == 7);
    CHECK(config.slit_index == 3);
    CHECK(config.meter.n == 1024);
    CHECK_FALSE(config.meter.half_width.has_value());
    CHECK(config.meter.sigma_x == doctest::Approx(0.4));
    CHECK(config.meter.kappa == doctest::Approx(6.0));
    CHECK(config.tol_scale == doctest::Approx(2.0));
    CHECK(config.out == "report.json");
    CHECK(config.format == ReportFormat::csv);
}

TEST_CASE("parse_config_json reports the failing field path") {
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"scenario":"beam-splitter","banana":1})"),
                         doctest::Contains("banana"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"scenario":"nope"})"),
                         doctest::Contains("scenario"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config_json(R"({"scenario":"single-slit","dim":8,"slit_index":9})"),
        doctest::Contains("slit_index"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config_json(R"({"scenario":"stern-gerlach","meter":{"sigma_x":-1}})"),
        doctest::Contains("meter.sigma_x"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"scenario":"beam-splitter","dim":"two"})"),
                         doctest::Contains("dim"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
}

TEST_CASE("scenario reports are reproducible byte for byte") {
    ScenarioConfig config = default_config(ScenarioKind::beam_splitter);
    std::string first = emit_report(run_scenario(config), ReportFormat::json);
    std::string second = emit_report(run_scenario(config), ReportFormat::json);
    CHECK(first == second);
    CHECK(first.find("\"schema_version\":1") != std::string::npos);
}

TEST_CASE("beam splitter scenario passes its checks") {
    RunReport report = run_scenario(default_config(ScenarioKind::beam_splitter));
    CHECK(all_pass(report));
    // Checks arrive sorted by name.
    for (std::size_t i = 1; i < report.checks.size(); ++i) {
        CHECK(report.checks[i - 1].name < report.checks[i].name);
    }
}

TEST_CASE("stern-gerlach scenario passes its checks") {
    RunReport report = run_scenario(default_config(ScenarioKind::stern_gerlach));
    CHECK(all_pass(report));
    CHECK(report.checks.size() >= 4);
}

TEST_CASE("identity suite passes at reduced size") {
    ScenarioConfig config = default_config(ScenarioKind::identity_suite);
    config.dim_max = 3;
    config.seeds = 1;
    RunReport report = run_scenario(config);
    CHECK(all_pass(report));
    CHECK(report.checks.size() >= 20);
}

TEST_CASE("config validation failures carry the field path") {
    ScenarioConfig config = default_config(ScenarioKind::single_slit);
    config.slit_index = 40;
    config.dim = 32;
    CHECK_THROWS_WITH_AS(run_scenario(config), doctest::Contains("slit_index"), ConfigError);
}
