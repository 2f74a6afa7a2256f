#pragma once

#include <complex>
#include <cstdio>
#include <ostream>
#include <string>

namespace qergo::detail {

// Round-trip-safe fixed formatting: all serialized floats use 17
// significant digits so equal reports are byte-identical.
inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

inline void write_complex_json(std::ostream& os, std::complex<double> z) {
    os << '[' << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << ']';
}

}  // namespace qergo::detail
