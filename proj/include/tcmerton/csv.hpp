#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <system_error>

namespace tcmerton::csv {

/// Shortest decimal that parses back to the same double.
inline std::string number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string boolean(bool value) { return value ? "true" : "false"; }

/// Joins already-formatted fields with commas and terminates the row.
inline std::string row(std::initializer_list<std::string_view> fields) {
    std::string out;
    bool first = true;
    for (auto f : fields) {
        if (!first) out += ',';
        out += f;
        first = false;
    }
    out += '\n';
    return out;
}

}  // namespace tcmerton::csv
