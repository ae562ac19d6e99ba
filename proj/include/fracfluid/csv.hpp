#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <system_error>

namespace fracfluid {

/// Locale-independent scientific notation with `digits` digits after the point.
inline std::string format_sci(double v, int digits = 10) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

/// Shortest round-trip representation.
inline std::string format_plain(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v, int digits = 6) {
    return v ? format_sci(*v, digits) : std::string();
}

}  // namespace fracfluid
