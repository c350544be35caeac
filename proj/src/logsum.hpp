#pragma once

#include <cmath>
#include <limits>

#include "corrprod/quadrature.hpp"

namespace corrprod::detail {

using quad::detail::LogSum;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_add_exp(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (b == kNegInf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

// Sum of sign_i exp(l_i) in extended precision, referenced to the largest
// magnitude seen so far. Tracks that magnitude to expose cancellation.
struct SignedLogSum {
    double ref = kNegInf;
    long double acc = 0.0L;

    void add(double l, int sign)
    {
        if (l == kNegInf || sign == 0)
            return;
        if (l > ref) {
            acc *= std::exp(static_cast<long double>(ref - l));
            ref = l;
        }
        acc += sign * std::exp(static_cast<long double>(l - ref));
    }
    /// |sum| relative to the largest term.
    double relative_size() const { return static_cast<double>(std::fabs(acc)); }
    double log_abs() const { return ref + static_cast<double>(std::log(std::fabs(acc))); }
    int sign() const { return acc > 0 ? 1 : (acc < 0 ? -1 : 0); }
};

} // namespace corrprod::detail
