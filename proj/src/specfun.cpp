#include "corrprod/specfun.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "corrprod/errors.hpp"
#include "corrprod/quadrature.hpp"

namespace corrprod::specfun {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }
bool is_integer(double x) { return x == std::nearbyint(x); }

// sin(pi x) with the argument reduced exactly, so that it vanishes at integers.
double sin_pi(double x)
{
    const double r = std::remainder(x, 2.0);
    return std::sin(pi * r);
}

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993227684700473478,  676.520368121885098567009190444019,
    -1259.13921672240287047156078755283, 771.3234287776530788486528258894,
    -176.61502916214059906584551354,     12.507343278686904814458936853,
    -0.13857109526572011689554707,       9.984369578019570859563e-6,
    1.50563273514931155834e-7};

double lanczos_series(double z)
{
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        a += kLanczos[i] / (z + static_cast<double>(i));
    return a;
}

double stirling_log_gamma(double x)
{
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double corr =
        r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))));
    return (x - 0.5) * std::log(x) - x + kLogSqrt2Pi + corr;
}

// Running sum kept as exp(log_scale) * sum, rescaled before overflow.
struct ScaledSum {
    double sum = 0.0;
    double term = 1.0;
    double log_scale = 0.0;

    void renormalize()
    {
        if (std::abs(term) > 1e250 || std::abs(sum) > 1e250) {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::numbers::ln10;
        }
    }
};

// U(-m, b, z) = (-1)^m sum_s C(m,s) (b+s)_{m-s} (-z)^s.
double tricomi_u_polynomial(int m, double b, double z)
{
    double total = 0.0;
    double zs = 1.0;
    for (int s = 0; s <= m; ++s) {
        const double binom = std::exp(log_binomial(m, s));
        total += std::nearbyint(binom) * pochhammer(b + s, m - s) * zs;
        zs *= -z;
    }
    return (m % 2 == 0) ? total : -total;
}

SignedLog from_value(double v)
{
    if (v == 0.0)
        return {-kInf, 0};
    return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

} // namespace

double SignedLog::value() const { return sign * std::exp(log_abs); }

// Gamma ---------------------------------------------------------------------

double gamma(double x)
{
    if (is_nonpositive_integer(x))
        throw PoleError("gamma: pole at x = " + std::to_string(x));
    if (std::isnan(x))
        throw_domain("gamma: NaN argument");
    if (x < 0.5)
        return pi / (sin_pi(x) * gamma(1.0 - x));
    if (x > 171.62)
        throw OverflowError("gamma: overflow at x = " + std::to_string(x));
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * pi) * half_pow * (half_pow * std::exp(-t)) * lanczos_series(z);
}

double log_gamma(double x)
{
    if (is_nonpositive_integer(x))
        throw PoleError("log_gamma: pole at x = " + std::to_string(x));
    if (x < 0.0)
        return std::log(pi) - std::log(std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    if (x >= 30.0)
        return stirling_log_gamma(x);
    if (x == 1.0 || x == 2.0)
        return 0.0;
    return std::log(std::abs(gamma(x)));
}

int gamma_sign(double x)
{
    if (x > 0.0)
        return 1;
    if (is_nonpositive_integer(x))
        throw PoleError("gamma_sign: pole at x = " + std::to_string(x));
    const auto fl = static_cast<long long>(std::floor(x));
    return (fl % 2 == 0) ? 1 : -1;
}

double rgamma(double x)
{
    if (is_nonpositive_integer(x))
        return 0.0;
    if (x > 171.0)
        return std::exp(-log_gamma(x));
    return 1.0 / gamma(x);
}

double pochhammer(double u, int j)
{
    double p = 1.0;
    for (int i = 0; i < j; ++i)
        p *= u + i;
    return p;
}

double log_binomial(int n, int k)
{
    if (k < 0 || k > n)
        return -kInf;
    if (k == 0 || k == n)
        return 0.0;
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

// Bessel I --------------------------------------------------------------------

SeriesValue bessel_i_series(double nu, double x, const SpecFunOptions& opts)
{
    opts.validate();
    if (x < 0.0)
        throw_domain("bessel_i: x must be >= 0");
    if (nu < 0.0 && is_integer(nu))
        nu = -nu;
    if (x == 0.0) {
        if (nu == 0.0)
            return {1.0, 1};
        if (nu > 0.0)
            return {0.0, 1};
        throw_domain("bessel_i: x = 0 with negative non-integer order");
    }
    const double q = 0.25 * x * x;
    double term = std::pow(0.5 * x, nu) * rgamma(nu + 1.0);
    double sum = term;
    int small = 0;
    for (int k = 0;; ++k) {
        if (k + 1 > opts.max_terms)
            throw_convergence("bessel_i: series exceeded max_terms");
        const double ratio = q / ((k + 1.0) * (k + nu + 1.0));
        term *= ratio;
        sum += term;
        const bool tiny = std::abs(term) < opts.rel_tol * std::abs(sum) + opts.abs_tol;
        small = (tiny && std::abs(ratio) < 1.0) ? small + 1 : 0;
        if (small >= 2)
            return {sum, k + 2};
    }
}

double log_bessel_i(double nu, double x)
{
    if (x < 0.0)
        throw_domain("log_bessel_i: x must be >= 0");
    if (nu < 0.0 && is_integer(nu))
        nu = -nu;
    if (x == 0.0) {
        if (nu == 0.0)
            return 0.0;
        if (nu > 0.0)
            return -kInf;
        throw_domain("log_bessel_i: x = 0 with negative order");
    }
    if (nu <= -1.0) {
        // I_{-a} = I_a + (2/pi) sin(a pi) K_a for non-integer a.
        const double a = -nu;
        const double v = bessel_i_scaled(a, x) + 2.0 / pi * sin_pi(a) * std::exp(log_bessel_k(a, x) - x);
        if (!(v > 0.0))
            throw_domain("log_bessel_i: I_nu(x) is not positive here");
        return x + std::log(v);
    }
    if (x > 40.0 && x > 2.0 * nu * nu) {
        // Hankel expansion; the exponentially small companion is below rounding.
        const double mu = 4.0 * nu * nu;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
            if (std::abs(next) > std::abs(term))
                break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum))
                break;
        }
        return x - 0.5 * std::log(2.0 * pi * x) + std::log(sum);
    }
    // Power series, every term positive because nu > -1.
    const double q = 0.25 * x * x;
    ScaledSum s;
    s.sum = 1.0;
    s.term = 1.0;
    int small = 0;
    for (int k = 0; k < 100000; ++k) {
        const double ratio = q / ((k + 1.0) * (k + nu + 1.0));
        s.term *= ratio;
        s.sum += s.term;
        s.renormalize();
        small = (s.term < 1e-17 * s.sum && ratio < 1.0) ? small + 1 : 0;
        if (small >= 2)
            return nu * std::log(0.5 * x) - log_gamma(nu + 1.0) + s.log_scale + std::log(s.sum);
    }
    throw_convergence("log_bessel_i: series did not converge");
}

double bessel_i_scaled(double nu, double x)
{
    if (nu < 0.0 && !is_integer(nu) && nu <= -1.0) {
        const double a = -nu;
        return bessel_i_scaled(a, x) + 2.0 / pi * sin_pi(a) * std::exp(log_bessel_k(a, x) - x);
    }
    return std::exp(log_bessel_i(nu, x) - x);
}

double bessel_i(double nu, double x)
{
    if (x <= 30.0)
        return bessel_i_series(nu, x).value;
    const double scaled = bessel_i_scaled(nu, x);
    const double v = scaled * std::exp(x);
    if (!std::isfinite(v))
        throw OverflowError("bessel_i: value overflows; use bessel_i_scaled");
    return v;
}

// Bessel K --------------------------------------------------------------------

double log_bessel_k(double nu, double x)
{
    if (!(x > 0.0))
        throw_domain("bessel_k: x must be > 0");
    nu = std::abs(nu);
    // K_nu(x) = 1/2 int exp(-x cosh w + nu w) dw over the real line; this is the
    // Laplace-type integral after t = (x/2) e^w. With w = w* + u, w* the
    // peak (sinh w* = nu/x), the exponent relative to its peak value is
    // -2X sinh^2(u/2) - nu (sinh u - u), X = x cosh(w*). For u < 0 the two
    // terms cancel; there it is -2(X - nu) sinh^2(u/2) - nu (expm1(u) - u).
    const double peak = nu > x ? std::log(nu) - std::log(x) + std::log(1.0 + std::hypot(1.0, x / nu))
                               : std::asinh(nu / x);
    const double big = std::hypot(x, nu);
    const double gap = x * x / (big + nu);
    // exponent at the peak, less the e^{-x} scaling: nu w* - x cosh w*
    const double at_peak = nu * peak - big;
    const double h0 = std::min(1.0, 1.0 / std::sqrt(big));
    auto logf = [nu, big, gap](double u) {
        const double sh = std::sinh(0.5 * u);
        if (u < 0.0)
            return -2.0 * gap * sh * sh - nu * (std::expm1(u) - u);
        return -2.0 * big * sh * sh - nu * (std::sinh(u) - u);
    };
    const auto r = quad::log_integrate_line(logf, 0.0, h0, 2e-15);
    return at_peak + r.log_value - std::numbers::ln2;
}

double bessel_k_scaled(double nu, double x) { return std::exp(log_bessel_k(nu, x) + x); }

double bessel_k(double nu, double x)
{
    const double v = std::exp(log_bessel_k(nu, x));
    if (!std::isfinite(v))
        throw OverflowError("bessel_k: value overflows; use log_bessel_k");
    return v;
}

std::vector<double> log_bessel_k_sequence(double nu0, double x, int count)
{
    std::vector<double> out;
    if (count <= 0)
        return out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(log_bessel_k(nu0, x));
    if (count == 1)
        return out;
    out.push_back(log_bessel_k(nu0 + 1.0, x));
    // K_{v+1} = K_{v-1} + (2v/x) K_v, carried as ratios K_{v+1}/K_v.
    double ratio = std::exp(out[1] - out[0]);
    for (int i = 2; i < count; ++i) {
        const double v = nu0 + i - 1;
        ratio = 1.0 / ratio + 2.0 * v / x;
        out.push_back(out.back() + std::log(ratio));
    }
    return out;
}

// Confluent hypergeometric ------------------------------------------------------

double log_laplace_kernel(double a, double c, double x)
{
    if (!(a > 0.0))
        throw_domain("log_laplace_kernel: a must be > 0");
    if (!(x > 0.0))
        throw_domain("log_laplace_kernel: x must be > 0");
    // t = e^{vs + u} with vs near the peak; the integrand is written relative
    // to its value at u = 0 so that no node carries the large common part.
    const double spread = a + std::max(c, 0.0);
    double vs = std::log(spread) - std::log(x);
    if (c < 0.0) {
        // Slope a + c/(1 + e^{-v}) - x e^v is decreasing; bisect for its root.
        const double lx = std::log(x);
        auto slope = [&](double v) { return a + c / (1.0 + std::exp(-v)) - std::exp(lx + v); };
        double hi = std::log(a) - lx + 1.0;
        double lo = hi - 1.0;
        while (slope(lo) <= 0.0)
            lo -= 2.0 * (hi - lo);
        for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++i) {
            const double mid = 0.5 * (lo + hi);
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        vs = 0.5 * (lo + hi);
    }
    const double xs = std::exp(std::log(x) + vs);
    const double sp0 = softplus(vs);
    auto logf = [a, c, xs, vs, sp0](double u) {
        if (u > 700.0)
            return -kInf;
        return a * u - xs * std::expm1(u) + c * (softplus(vs + u) - sp0);
    };
    const double h0 = std::min(1.0, 1.0 / std::sqrt(spread));
    try {
        return a * vs - xs + c * sp0 + quad::log_integrate_line(logf, 0.0, h0, 4e-15).log_value;
    } catch (const ConvergenceError& e) {
        char args[96];
        std::snprintf(args, sizeof args, " (a=%.17g, c=%.17g, x=%.17g)", a, c, x);
        throw_convergence(e.what() + std::string(args));
    }
}

SignedLog log_tricomi_u(double a, double b, double x)
{
    if (!(x > 0.0))
        throw_domain("tricomi_u: x must be > 0");
    if (a == 0.0)
        return {0.0, 1};
    if (is_nonpositive_integer(a))
        return from_value(tricomi_u_polynomial(static_cast<int>(-a), b, x));
    const double ak = a - b + 1.0;
    if (is_nonpositive_integer(ak)) {
        SignedLog p = from_value(tricomi_u_polynomial(static_cast<int>(-ak), 2.0 - b, x));
        p.log_abs += (1.0 - b) * std::log(x);
        return p;
    }
    if (a > 0.0)
        return {log_laplace_kernel(a, b - a - 1.0, x) - log_gamma(a), 1};
    if (ak > 0.0) {
        // Kummer: U(a,b,x) = x^{1-b} U(a-b+1, 2-b, x).
        return {(1.0 - b) * std::log(x) + log_laplace_kernel(ak, -a, x) - log_gamma(ak), 1};
    }
    // Both a and a-b+1 negative: recur downward in a from a positive start,
    // the direction in which U is the dominant solution.
    const int steps = static_cast<int>(std::ceil(-a)) + 1;
    double alpha = a + steps;
    const double l0 = log_laplace_kernel(alpha, b - alpha - 1.0, x) - log_gamma(alpha);
    const double l1 = log_laplace_kernel(alpha + 1.0, b - alpha - 2.0, x) - log_gamma(alpha + 1.0);
    double u0 = 1.0;
    double u1 = std::exp(l1 - l0);
    double log_scale = l0;
    for (int i = 0; i < steps; ++i) {
        const double down = -((b - 2.0 * alpha - x) * u0 + alpha * (alpha - b + 1.0) * u1);
        u1 = u0;
        u0 = down;
        alpha -= 1.0;
        const double m = std::max(std::abs(u0), std::abs(u1));
        if (m > 1e200 || (m < 1e-200 && m > 0.0)) {
            u0 /= m;
            u1 /= m;
            log_scale += std::log(m);
        }
    }
    SignedLog out = from_value(u0);
    out.log_abs += log_scale;
    return out;
}

double tricomi_u(double a, double b, double x)
{
    const SignedLog u = log_tricomi_u(a, b, x);
    const double v = u.value();
    if (!std::isfinite(v))
        throw OverflowError("tricomi_u: value overflows; use log_tricomi_u");
    return v;
}

SeriesValue hyp_0f1_series(double b, double x, const SpecFunOptions& opts)
{
    opts.validate();
    if (is_nonpositive_integer(b))
        throw PoleError("hyp_0f1: b is a non-positive integer");
    double term = 1.0;
    double sum = 1.0;
    int small = 0;
    for (int j = 0;; ++j) {
        if (j + 1 > opts.max_terms)
            throw_convergence("hyp_0f1: series exceeded max_terms");
        const double ratio = x / ((b + j) * (j + 1.0));
        term *= ratio;
        sum += term;
        const bool tiny = std::abs(term) < opts.rel_tol * std::abs(sum) + opts.abs_tol;
        small = (tiny && std::abs(ratio) < 1.0) ? small + 1 : 0;
        if (small >= 2 || term == 0.0)
            return {sum, j + 2};
    }
}

double hyp_0f1(double b, double x) { return hyp_0f1_series(b, x).value; }

double log_hyp_0f1(double b, double x)
{
    if (!(b > 0.0) || x < 0.0)
        throw_domain("log_hyp_0f1: needs b > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    if (x <= 100.0)
        return std::log(hyp_0f1(b, x));
    // 0F1(;b;x) = Gamma(b) x^{(1-b)/2} I_{b-1}(2 sqrt x).
    return log_gamma(b) + 0.5 * (1.0 - b) * std::log(x) + log_bessel_i(b - 1.0, 2.0 * std::sqrt(x));
}

double hyp_2f1_poly(double u, int k, double w)
{
    if (!(u > 0.0))
        throw_domain("hyp_2f1_poly: u must be > 0");
    if (k < 0)
        throw_domain("hyp_2f1_poly: k must be >= 0");
    double sum = 0.0;
    double wj = 1.0;
    for (int j = 0; j <= k; ++j) {
        sum += std::nearbyint(std::exp(log_binomial(k, j))) * wj / (pochhammer(u, k - j) * pochhammer(u, j));
        wj *= w;
    }
    return sum;
}

double whittaker_w(double kappa, double mu, double x)
{
    if (!(x > 0.0))
        throw_domain("whittaker_w: x must be > 0");
    SignedLog u = log_tricomi_u(0.5 + mu - kappa, 1.0 + 2.0 * mu, x);
    u.log_abs += -0.5 * x + (mu + 0.5) * std::log(x);
    return u.value();
}

} // namespace corrprod::specfun
