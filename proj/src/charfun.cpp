#include "corrprod/charfun.hpp"

#include <cmath>

namespace corrprod {

namespace {

constexpr ComplexValue kI{0.0, 1.0};

} // namespace

PartialFraction partial_fraction_terms(const BivariateParams& p)
{
    p.validate();
    const double a = p.std_mu_x();
    const double b = p.std_mu_y();
    const double r = p.rho;
    const double d = 1.0 - r * r;
    PartialFraction pf;
    pf.constant = -(a * a + b * b - 2.0 * r * a * b) / (2.0 * d);
    pf.coeff_plus = (1.0 + r) * (a - b) * (a - b) / (4.0 * d);
    pf.coeff_minus = (1.0 - r) * (a + b) * (a + b) / (4.0 * d);
    return pf;
}

ComplexValue cf_exponent_rational(const BivariateParams& p, ComplexValue t)
{
    const double a = p.std_mu_x();
    const double b = p.std_mu_y();
    const double r = p.rho;
    const double q = a * a + b * b - 2.0 * r * a * b;
    const ComplexValue w1 = 1.0 - (1.0 + r) * kI * t;
    const ComplexValue w2 = 1.0 + (1.0 - r) * kI * t;
    return (-q * t * t + 2.0 * a * b * kI * t) / (2.0 * w1 * w2);
}

ComplexValue log_cf_order(const BivariateParams& p, OrderSpec order, ComplexValue t)
{
    order.validate();
    const PartialFraction pf = partial_fraction_terms(p);
    const double r = p.rho;
    const ComplexValue ts = t * p.scale();
    const ComplexValue w1 = 1.0 - (1.0 + r) * kI * ts;
    const ComplexValue w2 = 1.0 + (1.0 - r) * kI * ts;
    // Per-factor principal logs: each factor has real part 1 on the real line.
    const ComplexValue log_power = -0.5 * order.nu * (std::log(w1) + std::log(w2));
    return log_power + order.nu * (pf.constant + pf.coeff_plus / w2 + pf.coeff_minus / w1);
}

ComplexValue cf_order(const BivariateParams& p, OrderSpec order, double t)
{
    if (t == 0.0)
        return {1.0, 0.0};
    return std::exp(log_cf_order(p, order, ComplexValue{t, 0.0}));
}

} // namespace corrprod
