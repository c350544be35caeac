#pragma once

// Double-exponential quadrature and a log-space trapezoid rule.
//
// Every density in this library is a positive integral whose integrand can
// over/underflow long before the integral does, so the workhorse here is
// log_integrate_line: the trapezoidal rule on the whole real line applied to
// exp(logf(v)), accumulated relative to the running maximum. After a t = e^v
// substitution the integrands we feed it decay at least exponentially in
// both directions, which is exactly the regime where the plain trapezoid
// converges geometrically in the step size (Mori's DE argument).
//
// tanh_sinh / exp_sinh are the classical DE rules for finite and
// semi-infinite ranges with endpoint singularities; gauss_kronrod is an
// adaptive G7K15 used for smooth oscillatory pieces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "corrprod/errors.hpp"
#include "corrprod/types.hpp"

namespace corrprod::quad {

template <class V>
struct QuadResult {
    V value{};
    double error = 0.0;
    int evaluations = 0;
    int levels = 0;
};

struct LogQuadResult {
    double log_value = -std::numeric_limits<double>::infinity();
    double rel_error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Running sum of exp(l_i), stored as exp(shift) * (scaled + comp), with
// Neumaier compensation.
struct LogSum {
    double shift = -std::numeric_limits<double>::infinity();
    double scaled = 0.0;
    double comp = 0.0;

    void add(double l)
    {
        if (l == -std::numeric_limits<double>::infinity())
            return;
        if (l > shift) {
            const double r = std::exp(shift - l);
            scaled *= r;
            comp *= r;
            shift = l;
            accumulate(1.0);
        } else {
            accumulate(std::exp(l - shift));
        }
    }
    void accumulate(double term)
    {
        const double t = scaled + term;
        comp += std::abs(scaled) >= std::abs(term) ? (scaled - t) + term : (term - t) + scaled;
        scaled = t;
    }
    double log() const
    {
        const double total = scaled + comp;
        return total > 0.0 ? shift + std::log(total) : -std::numeric_limits<double>::infinity();
    }
};

} // namespace detail

/// log of the integral over the real line of exp(logf(v)).
///
/// The integrand must be (roughly) unimodal with tails that fall below the
/// peak by more than `kTailDrop` nats. `v0` is a starting guess for the
/// peak and `h0` the initial step; both only affect cost, not the result.
template <class F>
LogQuadResult log_integrate_line(F&& logf, double v0, double h0, double rel_tol = 1e-14,
                                 int max_halvings = 12, int max_nodes = 400000)
{
    constexpr double kTailDrop = 48.0;
    constexpr int kClimbLimit = 100000;
    int evals = 0;
    auto eval = [&](double v) {
        ++evals;
        const double l = logf(v);
        if (std::isnan(l))
            throw_domain("log_integrate_line: integrand is NaN at v=" + std::to_string(v));
        return l;
    };

    double vp = v0;
    double lp = eval(vp);
    for (int dir : {+1, -1}) {
        for (int i = 0; i < kClimbLimit; ++i) {
            const double l = eval(vp + dir * h0);
            if (!(l > lp))
                break;
            vp += dir * h0;
            lp = l;
        }
    }
    if (lp == -std::numeric_limits<double>::infinity())
        return {-std::numeric_limits<double>::infinity(), 0.0, evals};
    if (!std::isfinite(lp))
        throw OverflowError("log_integrate_line: integrand overflows log range");

    // Level 0: walk out from the peak until three consecutive nodes are negligible.
    detail::LogSum sum;
    double lmax = lp;
    sum.add(lp);
    int lo = 0;
    int hi = 0;
    for (int dir : {+1, -1}) {
        int quiet = 0;
        for (int i = 1;; ++i) {
            if (evals > max_nodes)
                throw_convergence("log_integrate_line: integrand support too wide");
            const double l = eval(vp + dir * i * h0);
            sum.add(l);
            lmax = std::max(lmax, l);
            quiet = (l < lmax - kTailDrop) ? quiet + 1 : 0;
            if (quiet >= 3) {
                (dir > 0 ? hi : lo) = dir * i;
                break;
            }
        }
    }

    double h = h0;
    double estimate = sum.log() + std::log(h);
    for (int level = 1; level <= max_halvings; ++level) {
        const double half = 0.5 * h;
        for (int i = lo; i < hi; ++i) {
            // Midpoints between consecutive nodes of the previous level.
            const int sub = 1 << (level - 1);
            for (int s = 0; s < sub; ++s) {
                const double v = vp + i * h0 + (2 * s + 1) * half;
                sum.add(eval(v));
            }
            if (evals > max_nodes)
                throw_convergence("log_integrate_line: node budget exhausted");
        }
        h = half;
        const double next = sum.log() + std::log(h);
        const double diff = std::abs(std::expm1(estimate - next));
        estimate = next;
        // each exp(l - shift) carries about one ulp
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(evals));
        if (diff <= std::max(rel_tol, floor))
            return {estimate, diff, evals};
    }
    throw_convergence("log_integrate_line: no convergence after " + std::to_string(max_halvings) +
                      " halvings");
}

/// Tanh-sinh rule on [a, b]. Nodes are generated with their distance to the
/// nearer endpoint computed directly, so integrable endpoint singularities at
/// a or b (when that endpoint is 0) are sampled without cancellation.
template <class V, class F>
QuadResult<V> tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-10, int max_levels = 10,
                        double abs_tol = 0.0)
{
    using std::numbers::pi;
    constexpr double kUMax = 6.5;
    const double d = 0.5 * (b - a);
    QuadResult<V> out;
    if (d == 0.0)
        return out;

    auto term = [&](double u) -> V {
        const double s = 0.5 * pi * std::sinh(u);
        const double ch = std::cosh(s);
        const double w = d * 0.5 * pi * std::cosh(u) / (ch * ch);
        if (w == 0.0 || !std::isfinite(w))
            return V{};
        double x;
        if (u < 0.0)
            x = a + d * 2.0 / (1.0 + std::exp(-2.0 * s));
        else
            x = b - d * 2.0 / (1.0 + std::exp(2.0 * s));
        if (x <= a || x >= b)
            return V{};
        ++out.evaluations;
        return w * f(x);
    };

    // Level 0 with h = 1/2 and tail truncation once terms stop mattering.
    double h = 0.5;
    V sum = term(0.0);
    double umin = 0.0;
    double umax = 0.0;
    for (int dir : {+1, -1}) {
        int quiet = 0;
        double u = 0.0;
        while (true) {
            u += dir * h;
            if (std::abs(u) > kUMax)
                break;
            const V t = term(u);
            sum += t;
            const double mag = detail::magnitude(t);
            quiet = (mag <= 1e-18 * detail::magnitude(sum)) ? quiet + 1 : 0;
            if (quiet >= 2)
                break;
        }
        (dir > 0 ? umax : umin) = u;
    }
    V estimate = h * sum;
    for (int level = 1; level <= max_levels; ++level) {
        const double step = h;
        h *= 0.5;
        for (double u = umin + h; u < umax; u += step)
            sum += term(u);
        const V next = h * sum;
        out.error = detail::magnitude(next - estimate);
        out.levels = level;
        estimate = next;
        if (out.error <= std::max(rel_tol * detail::magnitude(next), abs_tol) && level >= 2) {
            out.value = next;
            return out;
        }
    }
    out.value = estimate;
    throw_convergence("tanh_sinh: no convergence, error estimate " + std::to_string(out.error));
}

/// Exp-sinh rule on [a, inf): x = a + scale * exp(pi/2 sinh u).
template <class V, class F>
QuadResult<V> exp_sinh(F&& f, double a, double scale = 1.0, double rel_tol = 1e-10,
                       int max_levels = 10, double abs_tol = 0.0)
{
    using std::numbers::pi;
    constexpr double kUMax = 6.5;
    QuadResult<V> out;

    auto term = [&](double u) -> V {
        const double s = 0.5 * pi * std::sinh(u);
        if (s > 700.0)
            return V{};
        const double e = std::exp(s);
        const double dist = scale * e;
        if (dist == 0.0)
            return V{};
        const double x = a + dist;
        if (!std::isfinite(x))
            return V{};
        const double w = dist * 0.5 * pi * std::cosh(u);
        ++out.evaluations;
        const V fx = f(x);
        if (detail::magnitude(fx) == 0.0)
            return V{};
        return w * fx;
    };

    double h = 0.5;
    V sum = term(0.0);
    double umin = 0.0;
    double umax = 0.0;
    for (int dir : {+1, -1}) {
        int quiet = 0;
        double u = 0.0;
        while (true) {
            u += dir * h;
            if (std::abs(u) > kUMax)
                break;
            const V t = term(u);
            sum += t;
            quiet = (detail::magnitude(t) <= 1e-18 * detail::magnitude(sum)) ? quiet + 1 : 0;
            if (quiet >= 3)
                break;
        }
        (dir > 0 ? umax : umin) = u;
    }
    V estimate = h * sum;
    for (int level = 1; level <= max_levels; ++level) {
        const double step = h;
        h *= 0.5;
        for (double u = umin + h; u < umax; u += step)
            sum += term(u);
        const V next = h * sum;
        out.error = detail::magnitude(next - estimate);
        out.levels = level;
        estimate = next;
        if (out.error <= std::max(rel_tol * detail::magnitude(next), abs_tol) && level >= 2) {
            out.value = next;
            return out;
        }
    }
    out.value = estimate;
    throw_convergence("exp_sinh: no convergence, error estimate " + std::to_string(out.error));
}

namespace detail {

template <class V, class F>
V g7k15(F& f, double a, double b, double& err, int& evals)
{
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const V fc = f(c);
    V kron = wk[7] * fc;
    V gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const V s = f(c - r * xk[i]) + f(c + r * xk[i]);
        kron += wk[i] * s;
        if (i % 2 == 1)
            gauss += wg[i / 2] * s;
    }
    evals += 15;
    err = magnitude(r * (kron - gauss));
    return r * kron;
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b].
template <class V, class F>
QuadResult<V> gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                            int max_intervals = 20000)
{
    struct Piece {
        double a, b, err;
        V val;
    };
    QuadResult<V> out;
    std::vector<Piece> heap;
    auto cmp = [](const Piece& x, const Piece& y) { return x.err < y.err; };
    double err = 0.0;
    V val = detail::g7k15<V>(f, a, b, err, out.evaluations);
    heap.push_back({a, b, err, val});
    V total = val;
    double total_err = err;
    while (total_err > std::max(rel_tol * detail::magnitude(total), abs_tol)) {
        if (static_cast<int>(heap.size()) >= max_intervals)
            throw_convergence("gauss_kronrod: interval budget exhausted");
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const Piece p = heap.back();
        heap.pop_back();
        const double m = 0.5 * (p.a + p.b);
        double e1 = 0.0;
        double e2 = 0.0;
        const V v1 = detail::g7k15<V>(f, p.a, m, e1, out.evaluations);
        const V v2 = detail::g7k15<V>(f, m, p.b, e2, out.evaluations);
        heap.push_back({p.a, m, e1, v1});
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back({m, p.b, e2, v2});
        std::push_heap(heap.begin(), heap.end(), cmp);
        // Re-sum to keep the running total free of drift.
        total = V{};
        total_err = 0.0;
        for (const auto& q : heap) {
            total += q.val;
            total_err += q.err;
        }
    }
    out.value = total;
    out.error = total_err;
    return out;
}

/// Integral of f over (0, inf) by the exp-sinh rule, governed by QuadOptions.
template <class F>
QuadResult<double> quad_semiinfinite(F&& f, const QuadOptions& q = {}, double scale = 1.0)
{
    q.validate();
    return exp_sinh<double>(std::forward<F>(f), 0.0, scale, q.target_rel_err, q.max_refinements);
}

} // namespace corrprod::quad
