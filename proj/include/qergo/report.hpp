#pragma once

#include <string>
#include <vector>

namespace qergo {

// One verification check. `values` and `references` usually hold a single
// number; sweep-style checks may carry one entry per case.
struct CheckResult {
    std::string name;
    std::vector<double> values;
    std::vector<double> references;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunReport {
    int schema_version = 1;
    std::string scenario;
    std::vector<CheckResult> checks;
    double duration_ms = 0.0;
};

enum class ReportFormat { json, csv, text };

ReportFormat parse_report_format(const std::string& name);

// Deterministic byte output for a fixed report; floats carry 17 significant
// digits. The wall-clock duration appears only in the text format so that
// identical runs produce byte-identical json/csv reports.
std::string emit_report(const RunReport& report, ReportFormat format);

// Writes emit_report output; throws IoError when the path is unwritable.
void write_report_file(const RunReport& report, ReportFormat format, const std::string& path);

bool all_pass(const RunReport& report);

// Convenience for assembling sweep checks.
CheckResult make_check(std::string name, double value, double reference, double tolerance);
CheckResult make_max_deviation_check(std::string name, double max_deviation, double tolerance);

// Sorts checks by name; report assembly is order-stable.
void sort_checks(RunReport& report);

}  // namespace qergo
