#include "corrprod/density_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "corrprod/errors.hpp"
#include "corrprod/specfun.hpp"
#include "logsum.hpp"

namespace corrprod {

namespace {

using detail::kNegInf;
using detail::LogSum;
using std::numbers::ln2;
using std::numbers::pi;
namespace sf = specfun;

// n * log(w), with 0 * log(0) read as 0.
double power_log(int n, double log_w) { return n == 0 ? 0.0 : n * log_w; }

double log_sq(double v) { return v == 0.0 ? kNegInf : 2.0 * std::log(std::abs(v)); }

// Grows on demand: log n! and log Gamma(shift + n).
class LogGammaTable {
public:
    explicit LogGammaTable(double shift) : shift_(shift) {}
    double operator()(int n)
    {
        while (static_cast<int>(values_.size()) <= n)
            values_.push_back(sf::log_gamma(shift_ + static_cast<double>(values_.size())));
        return values_[static_cast<std::size_t>(n)];
    }

private:
    double shift_;
    std::vector<double> values_;
};

// Two consecutive outer terms below rel_tol * sum + abs_tol ends the series.
class OuterMonitor {
public:
    OuterMonitor(const EvalOptions& opts, const char* who) : opts_(opts), who_(who) {}

    bool done(int k, double log_term, double log_sum)
    {
        const double bound = detail::log_add_exp(std::log(opts_.rel_tol) + log_sum, std::log(opts_.abs_tol));
        small_ = (log_term < bound) ? small_ + 1 : 0;
        if (small_ >= 2)
            return true;
        if (k + 1 >= opts_.max_k)
            throw_convergence(std::string(who_) + ": max_k reached before tolerance");
        return false;
    }

private:
    const EvalOptions& opts_;
    const char* who_;
    int small_ = 0;
};

double series_rel_error(const EvalOptions& opts, int terms)
{
    return opts.rel_tol + 1e-16 * (10.0 + terms);
}

void check_common(const BivariateParams& p, OrderSpec order, double x)
{
    p.validate();
    order.validate();
    if (!std::isfinite(x))
        throw_domain("x must be finite");
}

// log K_{nu0+i}(y), i = 0, 1, ... extended on demand by the upward recurrence.
class BesselKLadder {
public:
    BesselKLadder(double nu0, double y) : nu0_(nu0), y_(y) {}
    double operator()(int i)
    {
        while (static_cast<int>(logs_.size()) <= i) {
            const auto n = static_cast<int>(logs_.size());
            if (n < 2) {
                logs_.push_back(sf::log_bessel_k(nu0_ + n, y_));
                if (n == 1)
                    ratio_ = std::exp(logs_[1] - logs_[0]);
                continue;
            }
            ratio_ = 1.0 / ratio_ + 2.0 * (nu0_ + n - 1) / y_;
            logs_.push_back(logs_.back() + std::log(ratio_));
        }
        return logs_[static_cast<std::size_t>(i)];
    }

private:
    double nu0_;
    double y_;
    double ratio_ = 0.0;
    std::vector<double> logs_;
};

} // namespace

RatioCase ratio_case(const BivariateParams& p)
{
    const double a = p.std_mu_x();
    const double b = p.std_mu_y();
    const double tol = kRatioTolerance * std::max(1.0, std::abs(a));
    if (std::abs(a - b) < tol)
        return RatioCase::equal;
    if (std::abs(a + b) < tol)
        return RatioCase::opposite;
    return RatioCase::general;
}

SignIndex sign_and_index(double x, int j, int k)
{
    SignIndex out;
    out.sgn = x > 0.0 ? 1 : (x < 0.0 ? -1 : 0);
    out.a = x >= 0.0 ? k - j : j;
    return out;
}

EvalResult pdf_sum_series(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts)
{
    check_common(p, order, x);
    opts.validate();
    const double nu = order.nu;
    const double r = p.rho;
    const double omr2 = 1.0 - r * r;
    const double mx = p.std_mu_x();
    const double my = p.std_mu_y();
    const double q = mx * mx + my * my - 2.0 * r * mx * my;
    double log_a = log_sq(mx - my) + std::log1p(r) - std::log1p(-r);
    double log_b = log_sq(mx + my) + std::log1p(-r) - std::log1p(r);
    const double a0 = 0.5 * nu;
    double log_pref = (a0 - 1.0) * std::log(omr2) - (nu - 1.0) * ln2 - std::log(p.scale()) - nu * q / (2.0 * omr2);

    LogGammaTable log_fact(1.0);
    LogGammaTable log_gamma_a0(a0);
    LogSum total;
    OuterMonitor monitor(opts, "pdf_sum_series");

    if (x == 0.0) {
        if (nu <= 1.0)
            return EvalResult::infinite(Method::series_general);
        // U(.,b,z) -> Gamma(1-b)/Gamma(a-b+1) as z -> 0 because b = 2 - nu - k < 1.
        LogGammaTable log_gamma_nu1(nu - 1.0);
        const double log_nu8 = std::log(nu / 8.0);
        for (int k = 0;; ++k) {
            LogSum term;
            for (int j = 0; j <= k; ++j) {
                term.add(k * log_nu8 - log_fact(j) - log_fact(k - j) + power_log(j, log_a) + power_log(k - j, log_b) +
                         log_gamma_nu1(k) - log_gamma_a0(j) - log_gamma_a0(k - j));
            }
            total.add(term.log());
            if (monitor.done(k, term.log(), total.log()))
                return EvalResult::from_log(log_pref + total.log(), series_rel_error(opts, k), k + 1,
                                            Method::series_general);
        }
    }

    const double xi = x / p.scale();
    const double z = 2.0 * std::abs(xi) / omr2;
    if (x < 0.0)
        std::swap(log_a, log_b);
    log_pref += -std::abs(xi) / (1.0 + r * (x > 0.0 ? 1.0 : -1.0)) + (nu - 1.0) * std::log(z);

    // W(p, m) = int_0^inf exp(-z t) t^{a0+p-1} (1+t)^{a0+m-1} dt, one
    // anti-diagonal p + m = k at a time. W(p, m) = W(p, m-1) + W(p+1, m-1)
    // only adds positive numbers; W(k, 0) is the one new quadrature per k,
    // the rest of the diagonal follows from p = k-1 down to 0.
    std::vector<double> diag;
    const double log_nuz8 = std::log(nu * z / 8.0);
    for (int k = 0;; ++k) {
        diag.push_back(sf::log_laplace_kernel(a0 + k, a0 - 1.0, z));
        for (int i = k - 1; i >= 0; --i)
            diag[i] = detail::log_add_exp(diag[i], diag[i + 1]);

        LogSum term;
        for (int i = 0; i <= k; ++i) {
            const int m = k - i;
            if ((i > 0 && log_a == kNegInf) || (m > 0 && log_b == kNegInf))
                continue;
            const double l = k * log_nuz8 - log_fact(i) - log_fact(m) + power_log(i, log_a) + power_log(m, log_b) +
                             diag[i] - log_gamma_a0(i) - log_gamma_a0(m);
            if (std::isnan(l))
                throw_convergence("pdf_sum_series: summand is not a non-negative number");
            term.add(l);
        }
        total.add(term.log());
        if (monitor.done(k, term.log(), total.log()))
            return EvalResult::from_log(log_pref + total.log(), series_rel_error(opts, k), k + 1,
                                        Method::series_general);
    }
}

EvalResult pdf_mean(const BivariateParams& p, int n, double x, const EvalOptions& opts)
{
    if (n < 1)
        throw_domain("pdf_mean: n must be >= 1");
    EvalResult r = pdf_sum_series(p, OrderSpec::copies(n), n * x, opts);
    if (r.singular)
        return r;
    r.value *= n;
    r.log_value += std::log(static_cast<double>(n));
    r.err_estimate *= n;
    return r;
}

EvalResult pdf_sum_reduced(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts)
{
    check_common(p, order, x);
    opts.validate();
    const RatioCase rc = ratio_case(p);
    if (rc == RatioCase::general)
        throw_precondition("pdf_sum_reduced: needs mu_x/sigma_x = +-mu_y/sigma_y");
    const double nu = order.nu;
    const double r = p.rho;
    const double omr2 = 1.0 - r * r;
    const double mu = 0.5 * (std::abs(p.std_mu_x()) + std::abs(p.std_mu_y()));
    const bool equal = rc == RatioCase::equal;
    const double exponent = -nu * mu * mu / (equal ? 1.0 + r : 1.0 - r);
    const double log_coef = equal ? std::log1p(-r) - std::log1p(r) : std::log1p(r) - std::log1p(-r);
    const double log_ratio = std::log(0.5 * nu) + log_coef + log_sq(mu);
    double log_pref = (0.5 * nu - 1.0) * std::log(omr2) - (nu - 1.0) * ln2 - std::log(p.scale()) + exponent;

    // a_{0,k} for the equal case and a_{k,k} for the opposite one.
    auto index = [&](int k) {
        const bool use_k = equal ? x >= 0.0 : x < 0.0;
        return use_k ? k : 0;
    };

    LogSum total;
    OuterMonitor monitor(opts, "pdf_sum_reduced");
    if (x == 0.0 && nu <= 1.0)
        return EvalResult::infinite(Method::series_reduced);
    const double xi = x / p.scale();
    const double z = 2.0 * std::abs(xi) / omr2;
    if (x != 0.0)
        log_pref += -std::abs(xi) / (1.0 + r * (x > 0.0 ? 1.0 : -1.0));

    for (int k = 0;; ++k) {
        const int a = index(k);
        double log_u = 0.0;
        const double ua = 1.0 - 0.5 * nu - a;
        const double ub = 2.0 - nu - k;
        if (x == 0.0) {
            log_u = sf::log_gamma(1.0 - ub) - sf::log_gamma(ua - ub + 1.0);
        } else {
            const auto u = sf::log_tricomi_u(ua, ub, z);
            if (u.sign <= 0)
                throw_convergence("pdf_sum_reduced: U must be positive here");
            log_u = u.log_abs;
        }
        const double l = power_log(k, log_ratio) - sf::log_gamma(k + 1.0) - sf::log_gamma(0.5 * nu + a) + log_u;
        total.add(l);
        if (monitor.done(k, l, total.log()))
            return EvalResult::from_log(log_pref + total.log(), series_rel_error(opts, k), k + 1,
                                        Method::series_reduced);
    }
}

EvalResult pdf_sum_zero_means(const BivariateParams& p, OrderSpec order, double x)
{
    check_common(p, order, x);
    if (p.mu_x != 0.0 || p.mu_y != 0.0)
        throw_domain("pdf_sum_zero_means: both means must be zero");
    const double nu = order.nu;
    const double r = p.rho;
    const double omr2 = 1.0 - r * r;
    const double order_k = 0.5 * (nu - 1.0);
    const double log_s = std::log(p.scale());
    if (x == 0.0) {
        if (nu <= 1.0)
            return EvalResult::infinite(Method::closed_form);
        // |x|^a K_a(|x|/c) -> Gamma(a) 2^{a-1} c^a as x -> 0.
        const double l = sf::log_gamma(order_k) + (0.5 * nu - 1.0) * std::log(omr2) - ln2 - log_s -
                         0.5 * std::log(pi) - sf::log_gamma(0.5 * nu);
        return EvalResult::from_log(l, 1e-14, 1, Method::closed_form);
    }
    const double xi = x / p.scale();
    const double l = 0.5 * (1.0 - nu) * ln2 + order_k * std::log(std::abs(xi)) - log_s - 0.5 * std::log(pi * omr2) -
                     sf::log_gamma(0.5 * nu) + r * xi / omr2 + sf::log_bessel_k(order_k, std::abs(xi) / omr2);
    return EvalResult::from_log(l, 1e-14, 1, Method::closed_form);
}

EvalResult pdf_sum_rho0_series(const BivariateParams& p, OrderSpec order, double x, const EvalOptions& opts)
{
    check_common(p, order, x);
    opts.validate();
    if (p.rho != 0.0)
        throw_precondition("pdf_sum_rho0_series: needs rho = 0");
    double m = 0.0;
    if (p.mu_y == 0.0)
        m = p.std_mu_x();
    else if (p.mu_x == 0.0)
        m = p.std_mu_y();
    else
        throw_precondition("pdf_sum_rho0_series: needs one of the means to be zero");

    const double nu = order.nu;
    const double order_k = 0.5 * (nu - 1.0);
    const double log_c = log_sq(m) + std::log(0.25 * nu);
    const double log_pref = 0.5 * (1.0 - nu) * ln2 - std::log(p.scale()) - 0.5 * std::log(pi) - 0.5 * nu * m * m;

    LogGammaTable log_fact(1.0);
    LogGammaTable log_gamma_half(0.5 * nu);
    LogSum total;
    OuterMonitor monitor(opts, "pdf_sum_rho0_series");

    if (x == 0.0) {
        if (nu <= 1.0)
            return EvalResult::infinite(Method::bessel_series);
        // |x|^{a+k} K_{a+k}(|x|) -> Gamma(a+k) 2^{a+k-1}.
        LogGammaTable log_gamma_order(order_k);
        for (int k = 0;; ++k) {
            const double l = power_log(k, log_c) - log_fact(k) - log_gamma_half(k) + log_gamma_order(k) +
                             (order_k + k - 1.0) * ln2;
            total.add(l);
            if (monitor.done(k, l, total.log()))
                return EvalResult::from_log(log_pref + total.log(), series_rel_error(opts, k), k + 1,
                                            Method::bessel_series);
        }
    }

    const double y = std::abs(x) / p.scale();
    const double log_y = std::log(y);
    BesselKLadder log_k(order_k, y);
    for (int k = 0;; ++k) {
        const double l = power_log(k, log_c + log_y) - log_fact(k) - log_gamma_half(k) + log_k(k);
        total.add(l);
        if (monitor.done(k, l, total.log()))
            return EvalResult::from_log(log_pref + order_k * log_y + total.log(), series_rel_error(opts, k), k + 1,
                                        Method::bessel_series);
    }
}

EvalResult pdf_product_cui(const BivariateParams& p, double x, const EvalOptions& opts)
{
    p.validate();
    opts.validate();
    if (!std::isfinite(x) || x == 0.0)
        throw_domain("pdf_product_cui: x must be finite and non-zero");
    const double r = p.rho;
    const double omr2 = 1.0 - r * r;
    const double mx = p.std_mu_x();
    const double my = p.std_mu_y();
    const double xi = x / p.scale();
    const double ax = std::abs(xi);
    const double u = mx - r * my;
    const double v = my - r * mx;
    const double log_omr2 = std::log(omr2);
    const double log_pref =
        -std::log(pi) - std::log(p.scale()) - (mx * mx + my * my - 2.0 * r * (xi + mx * my)) / (2.0 * omr2);

    BesselKLadder log_k(0.0, ax / omr2);
    LogGammaTable log_fact(1.0);
    OuterMonitor monitor(opts, "pdf_product_cui");

    if (u == 0.0 || v == 0.0) {
        // Only j = 0 (u = 0) or j = 2k (v = 0) survives; all terms positive.
        const double log_w = log_sq(u == 0.0 ? v : u);
        LogSum total;
        for (int k = 0;; ++k) {
            const double l = k * std::log(ax) + power_log(k, log_w) - log_fact(2 * k) - (2.0 * k + 0.5) * log_omr2 +
                             log_k(k);
            total.add(l);
            if (monitor.done(k, l, total.log()))
                return EvalResult::from_log(log_pref + total.log(), series_rel_error(opts, k), k + 1,
                                            Method::cui_series);
        }
    }

    const double log_u = std::log(std::abs(u));
    const double log_v = std::log(std::abs(v));
    const int sx = xi < 0.0 ? -1 : 1;
    const int su = u < 0.0 ? -1 : 1;
    const int sv = v < 0.0 ? -1 : 1;
    detail::SignedLogSum total;
    for (int k = 0;; ++k) {
        double block_max = kNegInf;
        const double common = k * std::log(ax) - log_fact(2 * k) - (2.0 * k + 0.5) * log_omr2;
        for (int j = 0; j <= 2 * k; ++j) {
            const int sign = ((j % 2 == 1) ? sx * su : 1) * (((2 * k - j) % 2 == 1) ? sv : 1);
            const double l =
                common + sf::log_binomial(2 * k, j) + j * log_u + (2 * k - j) * log_v + log_k(std::abs(j - k));
            total.add(l, sign);
            block_max = std::max(block_max, l);
        }
        const double log_sum = total.sign() > 0 ? total.log_abs() : kNegInf;
        if (monitor.done(k, block_max, log_sum)) {
            const double size = total.relative_size();
            EvalResult res = EvalResult::from_log(log_pref + total.log_abs(),
                                                  series_rel_error(opts, k) + 1e-18 / size, k + 1,
                                                  Method::cui_series);
            return res;
        }
    }
}

} // namespace corrprod
