#pragma once

// Integral representations of the density of S_nu.

#include "corrprod/types.hpp"

namespace corrprod {

/// Single integral with modified Bessel I factors. The three parameter cases
/// (|mu_x/sigma_x| != |mu_y/sigma_y|, equal ratios, opposite ratios) are
/// chosen with the same tolerance as the series; x < 0 goes through the
/// reflection (x, rho, mu_y) -> (-x, -rho, -mu_y). x != 0.
EvalResult pdf_sum_integral(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q = {});

/// Integral with a 0F1 factor for rho = 0 and one mean zero. x != 0.
EvalResult pdf_sum_rho0_integral(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q = {});

} // namespace corrprod
