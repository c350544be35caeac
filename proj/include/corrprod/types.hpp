#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace corrprod {

/// Parameters of the bivariate normal vector (X, Y).
struct BivariateParams {
    double mu_x = 0.0;
    double mu_y = 0.0;
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    double rho = 0.0;

    /// Throws DomainError unless sigma_x, sigma_y > 0 and -1 < rho < 1.
    void validate() const;

    /// sigma_x * sigma_y, the natural unit of the product.
    double scale() const { return sigma_x * sigma_y; }
    double std_mu_x() const { return mu_x / sigma_x; }
    double std_mu_y() const { return mu_y / sigma_y; }

    /// E[Z] = mu_x mu_y + rho sigma_x sigma_y.
    double product_mean() const { return mu_x * mu_y + rho * sigma_x * sigma_y; }
    double product_variance() const;

    /// Law of -Z: (x, rho, mu_y) -> (-x, -rho, -mu_y).
    BivariateParams reflected() const { return {mu_x, -mu_y, sigma_x, sigma_y, -rho}; }
};

/// Convolution order nu > 0. Integer nu = n is the sum of n copies, nu = 1/m
/// the infinitely-divisible factor.
struct OrderSpec {
    double nu = 1.0;

    void validate() const;
    static OrderSpec copies(int n) { return {static_cast<double>(n)}; }
    static OrderSpec divisor(int m) { return {1.0 / static_cast<double>(m)}; }
};

struct SpecFunOptions {
    double rel_tol = 1e-15;
    double abs_tol = 0.0;
    int max_terms = 100000;
    int quad_points = 4096;

    void validate() const;
};

struct EvalOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int max_k = 400;

    void validate() const;
};

struct QuadOptions {
    double target_rel_err = 1e-10;
    int max_refinements = 12;
    int levels = 6;

    void validate() const;
};

enum class Method {
    series_general,
    series_reduced,
    closed_form,
    bessel_series,
    cui_series,
    integral,
    cf_inversion,
};

std::string_view to_string(Method m);

struct EvalResult {
    double value = 0.0;
    /// log(value); kept separately so that far-tail densities that underflow
    /// in `value` can still be compared.
    double log_value = -std::numeric_limits<double>::infinity();
    double err_estimate = 0.0;
    int terms_used = 0;
    Method method = Method::series_general;
    /// True at the integrable singularity x = 0 for nu <= 1.
    bool singular = false;

    static EvalResult from_log(double log_value, double rel_err, int terms, Method m);
    static EvalResult infinite(Method m);
};

struct GridSpec {
    double lo = -1.0;
    double hi = 1.0;
    int points = 2;

    void validate() const;
    double at(int i) const { return lo + (hi - lo) * i / (points - 1); }
    double step() const { return (hi - lo) / (points - 1); }
};

struct McConfig {
    std::int64_t n_samples = 100000;
    std::uint64_t seed = 0x5eed;
    std::int64_t batch = 8192;
    int threads = 1;
};

} // namespace corrprod
