#include "corrprod/dispatch.hpp"

#include <cmath>
#include <string>

#include "corrprod/density_integral.hpp"
#include "corrprod/density_series.hpp"
#include "corrprod/errors.hpp"
#include "corrprod/verify.hpp"

namespace corrprod {

namespace {

bool zero_means(const BivariateParams& p) { return p.mu_x == 0.0 && p.mu_y == 0.0; }

bool rho0_one_mean(const BivariateParams& p) { return p.rho == 0.0 && (p.mu_x == 0.0 || p.mu_y == 0.0); }

EvalResult automatic(const BivariateParams& p, OrderSpec order, double x, const EvalSettings& s)
{
    if (zero_means(p))
        return pdf_sum_zero_means(p, order, x);
    const bool far = std::abs(x) >= s.integral_threshold * p.scale();
    if (ratio_case(p) != RatioCase::general) {
        try {
            return pdf_sum_reduced(p, order, x, s.series);
        } catch (const ConvergenceError&) {
            if (!far)
                throw;
            return pdf_sum_integral(p, order, x, s.quad);
        }
    }
    if (rho0_one_mean(p)) {
        try {
            return pdf_sum_rho0_series(p, order, x, s.series);
        } catch (const ConvergenceError&) {
            if (!far)
                throw;
            return pdf_sum_rho0_integral(p, order, x, s.quad);
        }
    }
    if (far) {
        try {
            return pdf_sum_integral(p, order, x, s.quad);
        } catch (const ConvergenceError&) {
            return pdf_sum_series(p, order, x, s.series);
        }
    }
    return pdf_sum_series(p, order, x, s.series);
}

} // namespace

MethodChoice parse_method_choice(std::string_view name)
{
    if (name == "auto")
        return MethodChoice::automatic;
    if (name == "series")
        return MethodChoice::series;
    if (name == "integral")
        return MethodChoice::integral;
    if (name == "cf")
        return MethodChoice::cf;
    if (name == "closed")
        return MethodChoice::closed;
    throw_domain("unknown method '" + std::string(name) + "' (auto, series, integral, cf, closed)");
}

std::string_view to_string(MethodChoice m)
{
    switch (m) {
    case MethodChoice::automatic: return "auto";
    case MethodChoice::series: return "series";
    case MethodChoice::integral: return "integral";
    case MethodChoice::cf: return "cf";
    case MethodChoice::closed: return "closed";
    }
    return "auto";
}

EvalResult evaluate_density(const BivariateParams& p, OrderSpec order, double x, MethodChoice method,
                            const EvalSettings& settings)
{
    p.validate();
    order.validate();
    switch (method) {
    case MethodChoice::automatic: return automatic(p, order, x, settings);
    case MethodChoice::series: return pdf_sum_series(p, order, x, settings.series);
    case MethodChoice::integral:
        if (x == 0.0)
            throw_domain("the integral representation is not defined at x = 0");
        return pdf_sum_integral(p, order, x, settings.quad);
    case MethodChoice::cf: return pdf_cf_inversion(p, order, x, settings.quad);
    case MethodChoice::closed: return pdf_sum_zero_means(p, order, x);
    }
    throw_domain("unknown method");
}

EvalResult evaluate_mean_density(const BivariateParams& p, int n, double x, MethodChoice method,
                                 const EvalSettings& settings)
{
    if (n < 1)
        throw_domain("n must be >= 1");
    EvalResult r = evaluate_density(p, OrderSpec::copies(n), n * x, method, settings);
    if (r.singular)
        return r;
    r.value *= n;
    r.log_value += std::log(static_cast<double>(n));
    r.err_estimate *= n;
    return r;
}

} // namespace corrprod
