#pragma once

// Counter-based generator for the Monte Carlo checks.
//
// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection of a 128-bit
// counter. Sample i, copy j of a run with seed s uses counter (i_lo, i_hi,
// j, 0) and key (s_lo, s_hi); the resulting 4 words give two 52-bit
// uniforms and, through Box-Muller, the pair (G1, G2). Nothing depends on
// the order in which samples are produced.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace corrprod::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace detail

inline Counter philox4x32(Counter c, Key k)
{
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += w0;
            k[1] += w1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(m0, c[0], hi0, lo0);
        detail::mulhilo(m1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

/// Uniform on (0, 1) from 52 bits of (hi, lo): a midpoint of the 2^52
/// equal cells, so never 0 or 1.
inline double to_unit(std::uint32_t hi, std::uint32_t lo)
{
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 20) | (lo >> 12);
    return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

inline Key key_from_seed(std::uint64_t seed)
{
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Two independent standard normals for (sample, copy).
inline std::pair<double, double> normal_pair(Key key, std::uint64_t sample, std::uint32_t copy)
{
    const Counter c =
        philox4x32({static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), copy, 0u}, key);
    const double u1 = to_unit(c[0], c[1]);
    const double u2 = to_unit(c[2], c[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

} // namespace corrprod::rng
