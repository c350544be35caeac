#include "corrprod/types.hpp"

#include <cmath>
#include <string>

#include "corrprod/errors.hpp"

namespace corrprod {

void BivariateParams::validate() const
{
    if (!std::isfinite(mu_x) || !std::isfinite(mu_y))
        throw_domain("means must be finite");
    if (!(sigma_x > 0.0) || !std::isfinite(sigma_x) || !(sigma_y > 0.0) || !std::isfinite(sigma_y))
        throw_domain("sigma_x and sigma_y must be finite and > 0");
    if (!(rho > -1.0 && rho < 1.0)) {
        if (std::abs(rho) == 1.0)
            throw_domain("rho = +-1 is degenerate: Z is then a scaled non-central chi-square, "
                         "which is infinitely divisible but outside this library");
        throw_domain("rho must lie in (-1, 1)");
    }
}

double BivariateParams::product_variance() const
{
    // Var(XY) for jointly normal X, Y.
    const double sx2 = sigma_x * sigma_x;
    const double sy2 = sigma_y * sigma_y;
    const double c = rho * sigma_x * sigma_y;
    return mu_x * mu_x * sy2 + mu_y * mu_y * sx2 + 2.0 * mu_x * mu_y * c + sx2 * sy2 + c * c;
}

void OrderSpec::validate() const
{
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw_domain("order nu must be finite and > 0");
}

void SpecFunOptions::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_terms < 1 || quad_points < 8)
        throw_domain("SpecFunOptions: need rel_tol > 0, abs_tol >= 0, max_terms >= 1, quad_points >= 8");
}

void EvalOptions::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_k < 1)
        throw_domain("EvalOptions: need rel_tol > 0, abs_tol >= 0, max_k >= 1");
}

void QuadOptions::validate() const
{
    if (!(target_rel_err > 0.0) || max_refinements < 1 || levels < 0)
        throw_domain("QuadOptions: need target_rel_err > 0, max_refinements >= 1, levels >= 0");
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::series_general: return "series_general";
    case Method::series_reduced: return "series_reduced";
    case Method::closed_form: return "closed_form";
    case Method::bessel_series: return "bessel_series";
    case Method::cui_series: return "cui_series";
    case Method::integral: return "integral";
    case Method::cf_inversion: return "cf_inversion";
    }
    return "unknown";
}

EvalResult EvalResult::from_log(double log_value, double rel_err, int terms, Method m)
{
    EvalResult r;
    r.log_value = log_value;
    r.value = std::exp(log_value);
    r.err_estimate = std::abs(rel_err) * r.value;
    r.terms_used = terms;
    r.method = m;
    return r;
}

EvalResult EvalResult::infinite(Method m)
{
    EvalResult r;
    r.value = std::numeric_limits<double>::infinity();
    r.log_value = std::numeric_limits<double>::infinity();
    r.method = m;
    r.singular = true;
    return r;
}

void GridSpec::validate() const
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw_domain("grid needs finite lo < hi");
    if (points < 2)
        throw_domain("grid needs at least 2 points");
}

} // namespace corrprod
