#pragma once

// Characteristic function of S_nu, the nu-fold convolution of the law of XY.

#include <complex>

#include "corrprod/types.hpp"

namespace corrprod {

using ComplexValue = std::complex<double>;

/// Exponent of the CF of one standardized copy written as
/// constant + coeff_plus / (1 + (1-rho) i t) + coeff_minus / (1 - (1+rho) i t).
struct PartialFraction {
    double constant = 0.0;
    double coeff_plus = 0.0;
    double coeff_minus = 0.0;
};

PartialFraction partial_fraction_terms(const BivariateParams& p);

/// The CF exponent in its original rational form, standardized t.
ComplexValue cf_exponent_rational(const BivariateParams& p, ComplexValue t);

/// E[exp(i t S_nu)].
ComplexValue cf_order(const BivariateParams& p, OrderSpec order, double t);

/// log of the analytic continuation of the CF to complex t, on the branch
/// continuous from t = 0. Defined off the two branch points
/// t = -i/(1+rho) and t = i/(1-rho).
ComplexValue log_cf_order(const BivariateParams& p, OrderSpec order, ComplexValue t);

} // namespace corrprod
