#pragma once

// Series representations of the density of S_nu = Z_1 + ... + Z_nu (fractional
// nu understood through the characteristic function), and of the sample mean.

#include "corrprod/types.hpp"

namespace corrprod {

/// Relative tolerance used to decide that mu_x/sigma_x = +-mu_y/sigma_y.
inline constexpr double kRatioTolerance = 1e-12;

enum class RatioCase {
    general,  // |mu_x/sigma_x| != |mu_y/sigma_y|
    equal,    // mu_x/sigma_x == mu_y/sigma_y
    opposite, // mu_x/sigma_x == -mu_y/sigma_y
};

/// Both means zero satisfies `equal` and `opposite`; `equal` is returned.
RatioCase ratio_case(const BivariateParams& p);

struct SignIndex {
    int sgn = 0;
    int a = 0;
};

/// sgn(x) and the index a_{j,k}(x): k - j for x >= 0, j for x < 0.
SignIndex sign_and_index(double x, int j, int k);

/// General double series in U(1 - nu/2 - a, 2 - nu - k, .). Every summand is
/// non-negative. At x = 0 it returns EvalResult::infinite for nu <= 1.
EvalResult pdf_sum_series(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts = {});

/// Density of the sample mean of n copies: n f_{S_n}(n x).
EvalResult pdf_mean(const BivariateParams& p, int n, double x, const EvalOptions& opts = {});

/// Single series valid when mu_x/sigma_x = +-mu_y/sigma_y. Throws
/// PreconditionError otherwise.
EvalResult pdf_sum_reduced(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts = {});

/// Closed form in K_{(nu-1)/2} for mu_x = mu_y = 0 (DomainError otherwise).
EvalResult pdf_sum_zero_means(const BivariateParams& p, OrderSpec order, double x);

/// Bessel-K series for rho = 0 and one mean zero (mu_y = 0, or mu_x = 0 by
/// symmetry). PreconditionError otherwise.
EvalResult pdf_sum_rho0_series(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts = {});

/// Density of Z = XY from the double K-series with mixed-sign terms. The
/// single-series forms for mu_y/sigma_y = rho mu_x/sigma_x and
/// mu_x/sigma_x = rho mu_y/sigma_y are taken automatically. x != 0.
EvalResult pdf_product_cui(const BivariateParams& p, double x, const EvalOptions& opts = {});

} // namespace corrprod
