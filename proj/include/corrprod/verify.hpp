#pragma once

// Independent checks: CF inversion, Monte Carlo, numerical CDF and the two
// Fourier integrals behind the density formulas.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "corrprod/types.hpp"

namespace corrprod {

/// (1/pi) int_0^inf Re[e^{-ixt} phi(t)] dt. Needs nu >= 2. The line is
/// shifted to the saddle point of the moment generating function, and the
/// tail is taken along a vertical ray into the half plane where e^{-ixt}
/// decays, so no truncation is involved and far-tail values keep their
/// relative accuracy.
EvalResult pdf_cf_inversion(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q = {});

/// Samples of S_n = sum of n copies of XY, in sample order. Identical for
/// any batch size or thread count.
std::vector<double> sample_sum(const BivariateParams& p, int n, const McConfig& mc);

/// Samples [first, first + count) of the same stream.
void sample_sum_range(const BivariateParams& p, int n, std::uint64_t seed, std::int64_t first, std::int64_t count,
                      double* out);

struct MomentCheck {
    double mean = 0.0;
    double expected = 0.0;
    double std_error = 0.0;

    double z_score() const { return std_error > 0.0 ? (mean - expected) / std_error : 0.0; }
};

/// Sample mean against n E[Z], standard error from the exact variance.
MomentCheck moment_check(const std::vector<double>& samples, const BivariateParams& p, int n);

using DensityFn = std::function<double(double)>;

/// int_{-inf}^x f; `scale` is a typical width of f.
double mass_below(const DensityFn& f, double x, double scale, const QuadOptions& q = {});

/// int f over the real line.
double total_mass(const DensityFn& f, double scale, const QuadOptions& q = {});

/// CDF at sorted nodes: tail below nodes[0], then panel increments. Panels
/// with an endpoint at 0 use tanh-sinh for the singularity there. Throws
/// ConvergenceError if the result decreases.
std::vector<double> cdf_on_nodes(const DensityFn& f, const std::vector<double>& nodes, double scale,
                                 const QuadOptions& q = {});

/// P(S_nu <= x) by quadrature of the automatic density.
double cdf_numeric(const BivariateParams& p, OrderSpec order, double x, const QuadOptions& q = {});

/// Grid nodes plus 0 and +-scale 2^{-k} refinements towards it.
std::vector<double> ks_nodes(const GridSpec& grid, double scale);

/// sup |F_N - F| with F interpolated linearly between nodes.
double ks_statistic(std::vector<double> samples, const std::vector<double>& nodes, const std::vector<double>& cdf);

/// 1.5 times the asymptotic alpha = 0.01 critical value 1.63/sqrt(N).
double ks_bound(std::int64_t n_samples);

/// KS statistic of sample_sum(p, n, mc) against the quadrature CDF of S_n.
double ks_check(const BivariateParams& p, int n, const McConfig& mc, const GridSpec& grid);

/// Same, but the reference CDF comes from `reference` instead of `p`.
double ks_check(const BivariateParams& p, int n, const McConfig& mc, const GridSpec& grid,
                const BivariateParams& reference);

struct Int1Check {
    std::complex<double> lhs;
    std::complex<double> rhs;

    double rel_diff() const { return std::abs(lhs - rhs) / std::abs(rhs); }
};

/// int e^{ixt} (z + it)^{-rho} (y - it)^{-sigma} dt by quadrature, against
/// (2 pi / Gamma(d)) (y+z)^{1-rho-sigma} e^{-|x| th} U(1-d, 2-rho-sigma, |x|(y+z))
/// with (d, th) = (rho, z) for x >= 0 and (sigma, y) for x < 0.
Int1Check check_int1(double rho, double sigma, double y, double z, double x);

struct Int11Check {
    double lhs = 0.0;
    double rhs_whittaker = 0.0;
    double rhs_bessel = 0.0;
};

/// int e^{ixt} (1 + t^2)^{-rho} dt against its Whittaker-W and Bessel-K forms.
Int11Check check_int11(double rho, double x);

} // namespace corrprod
