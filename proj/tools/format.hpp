#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace corrprod::cli {

/// 17 significant digits, '.' as decimal point whatever the locale.
inline std::string fmt17(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace corrprod::cli
