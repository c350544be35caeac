#include "corrprod/divisibility.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "corrprod/charfun.hpp"
#include "corrprod/density_series.hpp"
#include "corrprod/dispatch.hpp"
#include "corrprod/errors.hpp"
#include "corrprod/quadrature.hpp"
#include "corrprod/verify.hpp"

namespace corrprod {

namespace {

constexpr int kMinCells = 4096;
constexpr double kTailMass = 1e-8;

DensityFn density_of(const BivariateParams& p, OrderSpec order)
{
    EvalSettings s;
    s.series.max_k = 50000;
    return [p, order, s](double x) {
        const EvalResult r = evaluate_density(p, order, x, MethodChoice::automatic, s);
        return r.singular ? 0.0 : r.value;
    };
}

// Five-point Gauss-Legendre average; enough for cells several widths away from 0.
double gauss5_average(const DensityFn& f, double a, double b)
{
    static constexpr double xk[3] = {0.0, 0.538469310105683091036314420700208, 0.906179845938663992797626878299393};
    static constexpr double wk[3] = {0.568888888888888888888888888888889, 0.478628670499366468041291514835638,
                                     0.236926885056189087514264040719918};
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double sum = wk[0] * f(c);
    for (int i = 1; i < 3; ++i)
        sum += wk[i] * (f(c - r * xk[i]) + f(c + r * xk[i]));
    return 0.5 * sum;
}

// Average of f over [a, b]; a cell touching 0 is split there.
double cell_average(const DensityFn& f, double a, double b)
{
    if (std::min(std::abs(a), std::abs(b)) > 8.0 * (b - a))
        return gauss5_average(f, a, b);
    auto piece = [&](double lo, double hi) {
        if (lo == 0.0 || hi == 0.0)
            return quad::tanh_sinh<double>(f, lo, hi, 1e-11, 12).value;
        return quad::gauss_kronrod<double>(f, lo, hi, 1e-11, 1e-18).value;
    };
    const double mass = (a < 0.0 && b > 0.0) ? piece(a, 0.0) + piece(0.0, b) : piece(a, b);
    return mass / (b - a);
}

std::vector<double> convolve(const std::vector<double>& u, const std::vector<double>& v)
{
    std::vector<double> w(u.size() + v.size() - 1, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            w[i + j] += u[i] * v[j];
    }
    return w;
}

} // namespace

EvalResult pdf_divisor(const BivariateParams& p, int m, double x, const EvalOptions& opts)
{
    if (m < 1)
        throw_domain("pdf_divisor: m must be >= 1");
    return pdf_sum_series(p, OrderSpec::divisor(m), x, opts);
}

double verify_divisibility_cf(const BivariateParams& p, int m, const std::vector<double>& t_grid)
{
    p.validate();
    if (m < 1)
        throw_domain("verify_divisibility_cf: m must be >= 1");
    double worst = 0.0;
    for (double t : t_grid) {
        const ComplexValue root = cf_order(p, OrderSpec::divisor(m), t);
        ComplexValue power = root;
        for (int i = 1; i < m; ++i)
            power *= root;
        worst = std::max(worst, std::abs(power - cf_order(p, OrderSpec{1.0}, t)));
    }
    return worst;
}

ConvolutionCheck convolution_check(const BivariateParams& p, int m, const GridSpec& grid)
{
    p.validate();
    grid.validate();
    if (m < 2 || m > 3)
        throw_domain("convolution_check: m must be 2 or 3");
    const double s = p.scale();
    const DensityFn root = density_of(p, OrderSpec::divisor(m));
    const DensityFn target = density_of(p, OrderSpec{1.0});

    // Half-width: start from the spread of the divisor and the grid, double
    // until both tails carry less than kTailMass.
    const double sd = std::sqrt(p.product_variance() / m);
    double L = std::max({std::abs(grid.lo), std::abs(grid.hi), 10.0 * sd + std::abs(p.product_mean()) / m});
    for (int attempt = 0;; ++attempt) {
        const double lower = quad::exp_sinh<double>([&](double u) { return root(-L - u); }, 0.0, sd, 1e-6, 10).value;
        const double upper = quad::exp_sinh<double>([&](double u) { return root(L + u); }, 0.0, sd, 1e-6, 10).value;
        if (lower + upper < kTailMass)
            break;
        if (attempt == 6)
            throw_precondition("convolution_check: divisor tail mass outside [-L, L] stays above 1e-8");
        L *= 1.5;
    }

    ConvolutionCheck out;
    const int half = kMinCells / 2;
    const double h = L / half;
    out.step = h;
    out.half_width = L;
    out.cells = 2 * half + 1;

    // Cell i covers [(i - half - 1/2) h, (i - half + 1/2) h]; entries are masses.
    std::vector<double> mass(out.cells);
    for (int i = 0; i < out.cells; ++i) {
        const double c = (i - half) * h;
        mass[i] = h * cell_average(root, c - 0.5 * h, c + 0.5 * h);
    }
    std::vector<double> conv = convolve(mass, mass);
    int offset = 2 * half;
    if (m == 3) {
        conv = convolve(conv, mass);
        offset = 3 * half;
    }

    const double exclude = 0.05 * s;
    bool any = false;
    for (int g = 0; g < grid.points; ++g) {
        const double x = grid.at(g);
        const long k = std::lround(x / h);
        const double c = k * h;
        if (std::abs(c) < exclude || std::abs(c) > L)
            continue;
        const double approx = conv[static_cast<std::size_t>(k + offset)] / h;
        const double exact = cell_average(target, c - 0.5 * h, c + 0.5 * h);
        const double dev = std::abs(approx - exact) / exact;
        any = true;
        if (dev > out.max_rel_dev) {
            out.max_rel_dev = dev;
            out.worst_x = c;
        }
    }
    if (!any)
        throw_domain("convolution_check: no grid node outside the excluded neighbourhood of 0");
    return out;
}

double verify_divisibility_convolution(const BivariateParams& p, int m, const GridSpec& grid)
{
    if (m == 1)
        return 0.0;
    return convolution_check(p, m, grid).max_rel_dev;
}

} // namespace corrprod
