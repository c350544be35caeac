#include "corrprod/density_integral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corrprod/density_series.hpp"
#include "corrprod/errors.hpp"
#include "corrprod/quadrature.hpp"
#include "corrprod/specfun.hpp"

namespace corrprod {

namespace {

namespace sf = specfun;
using std::numbers::ln2;
using std::numbers::pi;

// log(|w|^{-nu} I_nu(c |w|)) for c > 0, continuous at w = 0 where it equals
// nu log(c/2) - log Gamma(nu + 1).
double log_scaled_bessel_i(double nu, double c, double w)
{
    const double aw = std::abs(w);
    if (aw == 0.0)
        return nu * std::log(0.5 * c) - sf::log_gamma(nu + 1.0);
    return sf::log_bessel_i(nu, c * aw) - nu * std::log(aw);
}

// Integrates exp(logf(v)) dv with t = e^v; t0 locates the bulk of the
// integrand and decay its exponential rate there.
template <class F>
quad::LogQuadResult integrate_log_t(F&& logf, double t0, double decay, const QuadOptions& q)
{
    q.validate();
    const double h0 = std::min(1.0, 1.0 / std::sqrt(1.0 + decay * t0));
    return quad::log_integrate_line(logf, std::log(t0), h0, q.target_rel_err, q.max_refinements);
}

EvalResult finish(double log_value, const quad::LogQuadResult& r, const QuadOptions& q)
{
    return EvalResult::from_log(log_value, std::max(r.rel_error, 0.1 * q.target_rel_err), r.evaluations,
                                Method::integral);
}

// The x > 0 formulas, standardized units; the caller divides by sigma_x sigma_y.
EvalResult integral_positive(const BivariateParams& p, double nu, double xi, const QuadOptions& q)
{
    const double r = p.rho;
    const double omr2 = 1.0 - r * r;
    const double mx = p.std_mu_x();
    const double my = p.std_mu_y();
    const double a = 0.5 * nu;
    const double order = a - 1.0;
    const double alpha = 2.0 * xi / omr2;
    const double log_xi = std::log(xi);

    switch (ratio_case(p)) {
    case RatioCase::general: {
        const double dm = mx - my;
        const double dp = mx + my;
        const double k1 = std::sqrt(nu * xi) / (1.0 - r);
        const double k2 = std::sqrt(nu * xi) / (1.0 + r);
        const double qf = mx * mx + my * my - 2.0 * r * mx * my;
        // |mu_x^2 - mu_y^2|^{1-n/2} is split between the two Bessel factors.
        const double log_d = -std::log(omr2) + (1.0 - a) * std::log(0.25 * nu) + a * log_xi -
                             nu * qf / (2.0 * omr2) - xi / (1.0 + r);
        auto logf = [&](double v) {
            const double t = std::exp(v);
            return v + 0.25 * (nu - 2.0) * (v + std::log1p(t)) - alpha * t +
                   log_scaled_bessel_i(order, k1 * std::sqrt(t), dm) +
                   log_scaled_bessel_i(order, k2 * std::sqrt(1.0 + t), dp);
        };
        const double grow = std::abs(dm) * k1 + std::abs(dp) * k2;
        const double t0 = std::max(1.0 / alpha, std::pow(grow / (2.0 * alpha), 2.0));
        const auto res = integrate_log_t(logf, t0, alpha, q);
        return finish(log_d + res.log_value, res, q);
    }
    case RatioCase::equal:
    case RatioCase::opposite: {
        const bool equal = ratio_case(p) == RatioCase::equal;
        const double mu = 0.5 * (std::abs(mx) + std::abs(my));
        const double rp = equal ? 1.0 + r : 1.0 - r;
        const double rm = equal ? 1.0 - r : 1.0 + r;
        const double log_d = 0.25 * (2.0 - nu) * std::log(nu) - a * std::log(rm) - std::log(rp) -
                             sf::log_gamma(a) + 0.25 * (3.0 * nu - 2.0) * log_xi - nu * mu * mu / rp -
                             xi / (1.0 + r);
        const double c = 2.0 * std::sqrt(nu * xi) / rp;
        auto logf = [&](double v) {
            const double t = std::exp(v);
            const double l1t = std::log1p(t);
            // (t^2 (t+1))^{(n-2)/4} or ((t+1)^2 t)^{(n-2)/4}.
            const double power = equal ? 2.0 * v + l1t : v + 2.0 * l1t;
            const double arg = equal ? std::sqrt(1.0 + t) : std::sqrt(t);
            return v + 0.25 * (nu - 2.0) * power - alpha * t + log_scaled_bessel_i(order, c * arg, mu);
        };
        const double t0 = std::max(1.0 / alpha, std::pow(mu * c / (2.0 * alpha), 2.0));
        const auto res = integrate_log_t(logf, t0, alpha, q);
        return finish(log_d + res.log_value, res, q);
    }
    }
    throw_precondition("pdf_sum_integral: unreachable case");
}

} // namespace

EvalResult pdf_sum_integral(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q)
{
    p.validate();
    order.validate();
    q.validate();
    if (!std::isfinite(x) || x == 0.0)
        throw_domain("pdf_sum_integral: x must be finite and non-zero");
    const BivariateParams pp = x > 0.0 ? p : p.reflected();
    EvalResult r = integral_positive(pp, order.nu, std::abs(x) / p.scale(), q);
    r = EvalResult::from_log(r.log_value - std::log(p.scale()), r.err_estimate / r.value, r.terms_used,
                             Method::integral);
    return r;
}

EvalResult pdf_sum_rho0_integral(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q)
{
    p.validate();
    order.validate();
    q.validate();
    if (!std::isfinite(x) || x == 0.0)
        throw_domain("pdf_sum_rho0_integral: x must be finite and non-zero");
    if (p.rho != 0.0)
        throw_precondition("pdf_sum_rho0_integral: needs rho = 0");
    double m = 0.0;
    if (p.mu_y == 0.0)
        m = p.std_mu_x();
    else if (p.mu_x == 0.0)
        m = p.std_mu_y();
    else
        throw_precondition("pdf_sum_rho0_integral: needs one of the means to be zero");

    const double nu = order.nu;
    const double a = 0.5 * nu;
    const double xi = std::abs(x) / p.scale();
    const double xi2 = xi * xi;
    const double hyp = nu * m * m * xi2 / 8.0;
    const double log_pref = (nu - 1.0) * std::log(xi) - std::log(p.scale()) - 0.5 * std::log(pi) - nu * ln2 -
                            sf::log_gamma(a) - 0.5 * nu * m * m;
    auto logf = [&](double v) {
        const double t = std::exp(v);
        const double e = std::exp(-v);
        return v - 0.5 * (nu + 1.0) * v - t - 0.25 * xi2 * e + sf::log_hyp_0f1(a, hyp * e);
    };
    const double t0 = std::max(0.5 * xi, 0.5);
    const auto res = integrate_log_t(logf, t0, 1.0, q);
    return finish(log_pref + res.log_value, res, q);
}

} // namespace corrprod
