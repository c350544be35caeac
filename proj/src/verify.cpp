#include "corrprod/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "corrprod/charfun.hpp"
#include "corrprod/dispatch.hpp"
#include "corrprod/errors.hpp"
#include "corrprod/quadrature.hpp"
#include "corrprod/rng.hpp"
#include "corrprod/specfun.hpp"

namespace corrprod {

namespace {

namespace sf = specfun;
using std::numbers::pi;
using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};

// Both rays in CF inversion and check_int1 start this far from the origin.
constexpr double kRayOffset = 1.0;

DensityFn automatic_density(const BivariateParams& p, OrderSpec order)
{
    EvalSettings s;
    s.series.max_k = 50000;
    return [p, order, s](double x) {
        const EvalResult r = evaluate_density(p, order, x, MethodChoice::automatic, s);
        return r.singular ? 0.0 : r.value;
    };
}

double sum_sd(const BivariateParams& p, double nu) { return std::sqrt(nu * p.product_variance()); }

} // namespace

EvalResult pdf_cf_inversion(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q)
{
    p.validate();
    order.validate();
    q.validate();
    if (order.nu < 2.0)
        throw_domain("pdf_cf_inversion: needs nu >= 2 for an absolutely integrable characteristic function");
    if (!std::isfinite(x))
        throw_domain("pdf_cf_inversion: x must be finite");
    const double s = p.scale();
    const double xi = x / s;
    const double tol = q.target_rel_err;
    auto log_phi = [&](cplx tau) { return log_cf_order(p, order, tau / s); };

    // Contour at Im t = kappa through the saddle of log M(-kappa) + xi kappa,
    // with M the moment generating function; kappa lies between the branch
    // points -1/(1+rho) and 1/(1-rho). Everything is scaled by the saddle value.
    const double lo = -1.0 / (1.0 + p.rho);
    const double hi = 1.0 / (1.0 - p.rho);
    auto saddle_fn = [&](double k) { return std::real(log_phi(cplx{0.0, k})) + xi * k; };
    double a = lo, b = hi;
    const double g = 0.5 * (3.0 - std::sqrt(5.0));
    for (int it = 0; it < 200 && b - a > 1e-12 * (hi - lo); ++it) {
        const double m1 = a + g * (b - a), m2 = b - g * (b - a);
        const double f1 = saddle_fn(m1), f2 = saddle_fn(m2);
        if (!(f1 <= f2) && std::isfinite(f2))
            a = m1;
        else
            b = m2;
    }
    const double kappa = 0.5 * (a + b);
    const double log_scale = saddle_fn(kappa);
    auto integrand = [&](cplx tau) { return std::exp(log_phi(tau) - kI * xi * tau - log_scale); };

    // The ray through T must keep clear of the branch point in its half plane;
    // T >= 1/(1 -+ rho) bounds the real part of the CF exponent there by 0.
    // When the saddle lies on the far side of the real axis, T also grows
    // until the ray stays below the saddle value on its way down.
    double T = std::max(kRayOffset, 1.0 / (1.0 - (xi < 0.0 ? p.rho : -p.rho)));
    if (xi != 0.0) {
        const double y_end = xi > 0.0 ? std::min(kappa, lo) - 1.0 : std::max(kappa, hi) + 1.0;
        for (int doubling = 0; doubling < 30; ++doubling) {
            double peak = -std::numeric_limits<double>::infinity();
            for (int j = 0; j <= 64; ++j) {
                const cplx tau{T, kappa + (y_end - kappa) * j / 64.0};
                peak = std::max(peak, std::real(log_phi(tau) - kI * xi * tau) - log_scale);
            }
            if (peak <= std::log(10.0))
                break;
            T *= 2.0;
        }
    }
    const auto central = quad::gauss_kronrod<double>(
        [&](double u) { return std::real(integrand(cplx{u, kappa})); }, 0.0, T, tol);

    quad::QuadResult<double> tail;
    if (xi == 0.0) {
        tail = quad::exp_sinh<double>([&](double u) { return std::real(integrand(cplx{u, kappa})); }, T, 1.0, tol,
                                      q.max_refinements, 0.1 * tol * std::abs(central.value));
    } else {
        const double sg = xi > 0.0 ? -1.0 : 1.0;
        tail = quad::exp_sinh<double>(
            [&](double r) { return std::real(sg * kI * integrand(cplx{T, kappa + sg * r})); }, 0.0, 1.0, tol,
            q.max_refinements, 0.1 * tol * std::abs(central.value));
    }

    EvalResult out;
    out.method = Method::cf_inversion;
    const double total = central.value + tail.value;
    out.log_value = total > 0.0 ? std::log(total) + log_scale - std::log(pi * s)
                                : -std::numeric_limits<double>::infinity();
    out.value = total > 0.0 ? std::exp(out.log_value) : total * std::exp(log_scale) / (pi * s);
    out.err_estimate = (central.error + tail.error) * std::exp(log_scale) / (pi * s);
    out.terms_used = central.evaluations + tail.evaluations;
    return out;
}

void sample_sum_range(const BivariateParams& p, int n, std::uint64_t seed, std::int64_t first, std::int64_t count,
                      double* out)
{
    const rng::Key key = rng::key_from_seed(seed);
    const double c = std::sqrt(1.0 - p.rho * p.rho);
    for (std::int64_t i = 0; i < count; ++i) {
        const auto index = static_cast<std::uint64_t>(first + i);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const auto [g1, g2] = rng::normal_pair(key, index, static_cast<std::uint32_t>(j));
            const double x = p.mu_x + p.sigma_x * g1;
            const double y = p.mu_y + p.sigma_y * (p.rho * g1 + c * g2);
            acc += x * y;
        }
        out[i] = acc;
    }
}

std::vector<double> sample_sum(const BivariateParams& p, int n, const McConfig& mc)
{
    p.validate();
    if (n < 1)
        throw_domain("sample_sum: n must be >= 1");
    if (mc.n_samples < 0)
        throw_domain("sample_sum: n_samples must be >= 0");
    if (mc.batch < 1)
        throw_domain("sample_sum: batch must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(mc.n_samples));
    const std::int64_t batches = (mc.n_samples + mc.batch - 1) / mc.batch;
    const int threads = static_cast<int>(std::clamp<std::int64_t>(mc.threads, 1, std::max<std::int64_t>(batches, 1)));

    auto work = [&](int t) {
        for (std::int64_t b = t; b < batches; b += threads) {
            const std::int64_t first = b * mc.batch;
            const std::int64_t count = std::min(mc.batch, mc.n_samples - first);
            sample_sum_range(p, n, mc.seed, first, count, out.data() + first);
        }
    };
    if (threads == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(work, t);
    for (auto& th : pool)
        th.join();
    return out;
}

MomentCheck moment_check(const std::vector<double>& samples, const BivariateParams& p, int n)
{
    MomentCheck m;
    m.expected = n * p.product_mean();
    if (samples.empty())
        return m;
    double sum = 0.0;
    for (double v : samples)
        sum += v;
    const double count = static_cast<double>(samples.size());
    m.mean = sum / count;
    m.std_error = std::sqrt(n * p.product_variance() / count);
    return m;
}

double mass_below(const DensityFn& f, double x, double scale, const QuadOptions& q)
{
    q.validate();
    const double tol = q.target_rel_err;
    if (x <= 0.0)
        return quad::exp_sinh<double>([&](double u) { return f(x - u); }, 0.0, scale, tol, q.max_refinements).value;
    const double left =
        quad::exp_sinh<double>([&](double u) { return f(-u); }, 0.0, scale, tol, q.max_refinements).value;
    return left + quad::tanh_sinh<double>(f, 0.0, x, tol, q.max_refinements).value;
}

double total_mass(const DensityFn& f, double scale, const QuadOptions& q)
{
    q.validate();
    const double tol = q.target_rel_err;
    const double left =
        quad::exp_sinh<double>([&](double u) { return f(-u); }, 0.0, scale, tol, q.max_refinements).value;
    const double right = quad::exp_sinh<double>(f, 0.0, scale, tol, q.max_refinements).value;
    return left + right;
}

std::vector<double> cdf_on_nodes(const DensityFn& f, const std::vector<double>& nodes, double scale,
                                 const QuadOptions& q)
{
    q.validate();
    if (nodes.empty())
        return {};
    if (!std::is_sorted(nodes.begin(), nodes.end()))
        throw_domain("cdf_on_nodes: nodes must be sorted");
    const double tol = q.target_rel_err;
    auto panel = [&](double a, double b) {
        if (a == 0.0 || b == 0.0)
            return quad::tanh_sinh<double>(f, a, b, tol, q.max_refinements).value;
        return quad::gauss_kronrod<double>(f, a, b, tol, 1e-16).value;
    };
    std::vector<double> cdf(nodes.size());
    cdf[0] = mass_below(f, nodes[0], scale, q);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double a = nodes[i - 1];
        const double b = nodes[i];
        double inc = 0.0;
        if (a < 0.0 && b > 0.0)
            inc = panel(a, 0.0) + panel(0.0, b);
        else if (b > a)
            inc = panel(a, b);
        if (inc < -1e-12)
            throw_convergence("cdf_on_nodes: negative mass on [" + std::to_string(a) + ", " + std::to_string(b) +
                              "]; the density evaluation is wrong there");
        cdf[i] = cdf[i - 1] + std::max(inc, 0.0);
    }
    return cdf;
}

double cdf_numeric(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q)
{
    p.validate();
    order.validate();
    const double value = mass_below(automatic_density(p, order), x, sum_sd(p, order.nu), q);
    return std::clamp(value, 0.0, 1.0);
}

std::vector<double> ks_nodes(const GridSpec& grid, double scale)
{
    grid.validate();
    std::vector<double> nodes;
    nodes.reserve(grid.points + 100);
    for (int i = 0; i < grid.points; ++i)
        nodes.push_back(grid.at(i));
    auto inside = [&](double v) { return v > grid.lo && v < grid.hi; };
    if (inside(0.0))
        nodes.push_back(0.0);
    for (int k = 0; k <= 40; ++k) {
        const double d = std::ldexp(scale, -k);
        for (double v : {-d, d})
            if (inside(v))
                nodes.push_back(v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

double ks_statistic(std::vector<double> samples, const std::vector<double>& nodes, const std::vector<double>& cdf)
{
    if (samples.empty())
        return 0.0;
    if (nodes.size() != cdf.size() || nodes.size() < 2)
        throw_domain("ks_statistic: need matching nodes and CDF values");
    std::sort(samples.begin(), samples.end());
    const double count = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        double F;
        if (x <= nodes.front()) {
            F = cdf.front();
        } else if (x >= nodes.back()) {
            F = cdf.back();
        } else {
            while (nodes[j + 1] < x)
                ++j;
            const double w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
            F = cdf[j] + w * (cdf[j + 1] - cdf[j]);
        }
        d = std::max({d, (i + 1) / count - F, F - i / count});
    }
    return d;
}

double ks_bound(std::int64_t n_samples) { return 1.5 * 1.63 / std::sqrt(static_cast<double>(n_samples)); }

double ks_check(const BivariateParams& p, int n, const McConfig& mc, const GridSpec& grid)
{
    return ks_check(p, n, mc, grid, p);
}

double ks_check(const BivariateParams& p, int n, const McConfig& mc, const GridSpec& grid,
                const BivariateParams& reference)
{
    reference.validate();
    const std::vector<double> samples = sample_sum(p, n, mc);
    const OrderSpec order = OrderSpec::copies(n);
    const std::vector<double> nodes = ks_nodes(grid, reference.scale());
    const std::vector<double> cdf =
        cdf_on_nodes(automatic_density(reference, order), nodes, sum_sd(reference, n), QuadOptions{1e-9, 12, 6});
    return ks_statistic(samples, nodes, cdf);
}

Int1Check check_int1(double rho, double sigma, double y, double z, double x)
{
    if (!(y > 0.0) || !(z > 0.0))
        throw_domain("check_int1: y and z must be positive");
    if (!std::isfinite(x))
        throw_domain("check_int1: x must be finite");
    const bool half = rho == 0.5 && sigma == 0.5;
    if (!(rho + sigma > 1.0) && !half)
        throw_domain("check_int1: needs rho + sigma > 1, or rho = sigma = 1/2");
    if (half && x == 0.0)
        throw_domain("check_int1: the integral diverges at x = 0 for rho = sigma = 1/2");

    constexpr double tol = 1e-12;
    auto f = [&](cplx t) { return std::exp(kI * x * t - rho * std::log(z + kI * t) - sigma * std::log(y - kI * t)); };

    Int1Check out;
    const double T = kRayOffset;
    const auto central = quad::gauss_kronrod<cplx>([&](double t) { return f(t); }, -T, T, tol);
    if (x == 0.0) {
        const auto right = quad::exp_sinh<cplx>([&](double t) { return f(t); }, T, 1.0, tol, 12);
        const auto left = quad::exp_sinh<cplx>([&](double t) { return f(-t); }, T, 1.0, tol, 12);
        out.lhs = central.value + right.value + left.value;
        out.rhs = 2.0 * pi * std::exp(sf::log_gamma(rho + sigma - 1.0) - sf::log_gamma(rho) - sf::log_gamma(sigma) +
                                      (1.0 - rho - sigma) * std::log(y + z));
        return out;
    }
    const double sg = x > 0.0 ? 1.0 : -1.0;
    const double scale = 1.0 / std::abs(x);
    const auto right =
        quad::exp_sinh<cplx>([&](double r) { return f(cplx{T, sg * r}); }, 0.0, scale, tol, 12);
    const auto left =
        quad::exp_sinh<cplx>([&](double r) { return f(cplx{-T, sg * r}); }, 0.0, scale, tol, 12);
    out.lhs = central.value + sg * kI * (right.value - left.value);

    const double d = x >= 0.0 ? rho : sigma;
    const double th = x >= 0.0 ? z : y;
    const double ax = std::abs(x);
    const sf::SignedLog u = sf::log_tricomi_u(1.0 - d, 2.0 - rho - sigma, ax * (y + z));
    out.rhs = 2.0 * pi * sf::rgamma(d) * u.sign *
              std::exp((1.0 - rho - sigma) * std::log(y + z) - ax * th + u.log_abs);
    return out;
}

Int11Check check_int11(double rho, double x)
{
    if (!(rho > 0.5))
        throw_domain("check_int11: needs rho > 1/2");
    if (x == 0.0 || !std::isfinite(x))
        throw_domain("check_int11: x must be finite and non-zero");
    Int11Check out;
    out.lhs = check_int1(rho, rho, 1.0, 1.0, x).lhs.real();
    const double ax = std::abs(x);
    const double g = sf::gamma(rho);
    out.rhs_whittaker =
        std::pow(2.0, 1.0 - rho) * pi / g * std::pow(ax, rho - 1.0) * sf::whittaker_w(0.0, 0.5 - rho, 2.0 * ax);
    out.rhs_bessel = std::pow(2.0, 1.5 - rho) * std::sqrt(pi) / g * std::pow(ax, rho - 0.5) *
                     sf::bessel_k(rho - 0.5, ax);
    return out;
}

} // namespace corrprod
