#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace crossdock {

/// Shortest decimal that round-trips to the same double. Non-finite values
/// print as `inf`, `-inf` or `nan`.
inline std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

}  // namespace crossdock
