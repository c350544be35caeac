#pragma once

// Method selection shared by the CLI and the verification code.

#include <string_view>

#include "corrprod/types.hpp"

namespace corrprod {

enum class MethodChoice { automatic, series, integral, cf, closed };

MethodChoice parse_method_choice(std::string_view name);
std::string_view to_string(MethodChoice m);

struct EvalSettings {
    EvalOptions series{};
    QuadOptions quad{};
    /// |x| below this multiple of sigma_x sigma_y goes to a series in auto mode.
    double integral_threshold = 0.01;
};

/// Density of S_nu at x.
///
/// automatic: zero means -> closed form; mu_x/sigma_x = +-mu_y/sigma_y ->
/// reduced series; rho = 0 with one mean zero -> Bessel-K series (its
/// integral for |x| >= threshold); otherwise the integral for
/// |x| >= threshold * sigma_x sigma_y and the double series below. If the
/// chosen evaluator fails to converge the other representation is tried.
EvalResult evaluate_density(const BivariateParams& p, OrderSpec order, double x, MethodChoice method,
                            const EvalSettings& settings = {});

/// Density of the mean of n copies, n f_{S_n}(n x).
EvalResult evaluate_mean_density(const BivariateParams& p, int n, double x, MethodChoice method,
                                 const EvalSettings& settings = {});

} // namespace corrprod
