#include "qergo/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qergo/detail/format.hpp"
#include "qergo/errors.hpp"

namespace qergo {

namespace {

using detail::fmt_double;
using detail::json_escape;

void write_number_list(std::ostream& os, const std::vector<double>& xs) {
    if (xs.size() == 1) {
        os << fmt_double(xs[0]);
        return;
    }
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ',';
        os << fmt_double(xs[i]);
    }
    os << ']';
}

std::string join_semicolon(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ';';
        out += fmt_double(xs[i]);
    }
    return out;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "text") return ReportFormat::text;
    throw ConfigError("format: expected json, csv or text, got '" + name + "'");
}

std::string emit_report(const RunReport& report, ReportFormat format) {
    std::ostringstream os;
    switch (format) {
        case ReportFormat::json: {
            os << "{\"schema_version\":" << report.schema_version << ",\"scenario\":\""
               << json_escape(report.scenario) << "\",\"checks\":[";
            for (std::size_t i = 0; i < report.checks.size(); ++i) {
                const CheckResult& c = report.checks[i];
                if (i) os << ',';
                os << "{\"name\":\"" << json_escape(c.name) << "\",\"value\":";
                write_number_list(os, c.values);
                os << ",\"reference\":";
                write_number_list(os, c.references);
                os << ",\"deviation\":" << fmt_double(c.deviation)
                   << ",\"tolerance\":" << fmt_double(c.tolerance)
                   << ",\"pass\":" << (c.pass ? "true" : "false") << '}';
            }
            os << "]}";
            break;
        }
        case ReportFormat::csv: {
            os << "name,value,reference,deviation,pass\n";
            for (const CheckResult& c : report.checks) {
                os << c.name << ',' << join_semicolon(c.values) << ','
                   << join_semicolon(c.references) << ',' << fmt_double(c.deviation) << ','
                   << (c.pass ? "true" : "false") << '\n';
            }
            break;
        }
        case ReportFormat::text: {
            os << "scenario: " << report.scenario << '\n';
            int passed = 0;
            for (const CheckResult& c : report.checks) {
                os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                   << "  deviation=" << fmt_double(c.deviation)
                   << " tolerance=" << fmt_double(c.tolerance);
                if (c.values.size() == 1) {
                    os << " value=" << fmt_double(c.values[0])
                       << " reference=" << fmt_double(c.references.empty() ? 0.0 : c.references[0]);
                }
                os << '\n';
                if (c.pass) ++passed;
            }
            os << passed << '/' << report.checks.size() << " checks passed\n";
            os << "duration_ms: " << fmt_double(report.duration_ms) << '\n';
            break;
        }
    }
    return os.str();
}

void write_report_file(const RunReport& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << emit_report(report, format);
    if (!out) throw IoError("write to '" + path + "' failed");
}

bool all_pass(const RunReport& report) {
    return std::all_of(report.checks.begin(), report.checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

CheckResult make_check(std::string name, double value, double reference, double tolerance) {
    double dev = std::abs(value - reference);
    return {std::move(name), {value}, {reference}, dev, tolerance, dev <= tolerance};
}

CheckResult make_max_deviation_check(std::string name, double max_deviation, double tolerance) {
    return {std::move(name), {max_deviation}, {0.0}, max_deviation, tolerance,
            max_deviation <= tolerance};
}

void sort_checks(RunReport& report) {
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

}  // namespace qergo
