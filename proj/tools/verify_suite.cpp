#include "verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "corrprod/density_integral.hpp"
#include "corrprod/density_series.hpp"
#include "corrprod/divisibility.hpp"
#include "corrprod/errors.hpp"
#include "corrprod/verify.hpp"

namespace corrprod::cli {

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Suite {
public:
    explicit Suite(const CliConfig& cfg) : cfg_(cfg) {}

    // `measure` returns the observed deviation; it passes when <= threshold.
    void check(const std::string& name, double threshold, const std::function<double()>& measure,
               const std::string& detail = {})
    {
        CheckResult r;
        r.name = name;
        r.threshold = cfg_.check_tol ? *cfg_.check_tol : threshold;
        r.detail = detail;
        try {
            r.value = measure();
            r.passed = r.value <= r.threshold;
        } catch (const std::exception& e) {
            r.value = std::numeric_limits<double>::quiet_NaN();
            r.detail = e.what();
        }
        results_.push_back(r);
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    const CliConfig& cfg_;
    std::vector<CheckResult> results_;
};

} // namespace

std::vector<CheckResult> run_verify_suite(const CliConfig& cfg)
{
    const BivariateParams& p = cfg.params;
    const double s = p.scale();
    EvalOptions series = cfg.settings.series;
    series.max_k = std::max(series.max_k, 50000);
    const QuadOptions quad = cfg.settings.quad;
    Suite suite(cfg);

    const double xs[] = {-3.0, -0.7, 0.4, 2.5};
    for (double nu : {0.5, 1.0, 2.0, 3.5}) {
        const OrderSpec order{nu};
        const std::string tag = "nu=" + std::to_string(nu).substr(0, 3);
        suite.check("triangle.series_integral[" + tag + "]", 1e-7, [&] {
            double worst = 0.0;
            for (double x : xs) {
                const double a = pdf_sum_series(p, order, x * s, series).value;
                const double b = pdf_sum_integral(p, order, x * s, quad).value;
                worst = std::max(worst, rel_diff(b, a));
            }
            return worst;
        });
        if (nu >= 2.0) {
            suite.check("triangle.cf_inversion[" + tag + "]", 1e-5, [&] {
                double worst = 0.0;
                for (double x : xs) {
                    const double a = pdf_sum_series(p, order, x * s, series).value;
                    const double b = pdf_cf_inversion(p, order, x * s, quad).value;
                    worst = std::max(worst, rel_diff(b, a));
                }
                return worst;
            });
        }
    }

    const OrderSpec order{cfg.nu()};
    suite.check("normalization", 1e-6, [&] {
        EvalSettings es = cfg.settings;
        es.series.max_k = series.max_k;
        const DensityFn f = [&](double x) {
            const EvalResult r = evaluate_density(p, order, x, MethodChoice::automatic, es);
            return r.singular ? 0.0 : r.value;
        };
        return std::abs(total_mass(f, std::sqrt(order.nu * p.product_variance()), QuadOptions{1e-10, 12, 6}) - 1.0);
    });

    const int m = cfg.divisibility_m;
    suite.check("divisibility.cf_power[m=" + std::to_string(m) + "]", 1e-12, [&] {
        std::vector<double> t(101);
        for (int i = 0; i < 101; ++i)
            t[i] = (-20.0 + 0.4 * i) / s;
        return verify_divisibility_cf(p, m, t);
    });
    suite.check("divisibility.convolution[m=2]", 1e-3,
                [&] { return verify_divisibility_convolution(p, 2, GridSpec{0.2 * s, 6.0 * s, 30}); });

    struct Int1Case {
        double rho, sigma, y, z, x;
    };
    const Int1Case int1_cases[] = {
        {1.5, 1.0, 1.0, 1.0, 0.7}, {0.5, 0.5, 1.0, 1.0, 1.0}, {1.5, 1.0, 1.0, 1.0, -0.7},
        {0.8, 0.9, 2.0, 0.5, 3.0}, {2.0, 1.3, 0.4, 1.7, -2.0},
    };
    for (const auto& c : int1_cases) {
        const std::string tag = std::to_string(c.rho).substr(0, 3) + "," + std::to_string(c.sigma).substr(0, 3) +
                                "," + std::to_string(c.x).substr(0, 4);
        suite.check("int1[" + tag + "]", 1e-6, [&] { return check_int1(c.rho, c.sigma, c.y, c.z, c.x).rel_diff(); });
    }
    suite.check("int11.three_way[2.5,0.6]", 1e-8, [&] {
        const Int11Check r = check_int11(2.5, 0.6);
        return std::max({rel_diff(r.lhs, r.rhs_bessel), rel_diff(r.rhs_whittaker, r.rhs_bessel)});
    });
    suite.check("int11.pi_over_e[1,1]", 1e-10, [&] {
        const Int11Check r = check_int11(1.0, 1.0);
        const double exact = std::numbers::pi / std::numbers::e;
        return std::max({rel_diff(r.lhs, exact), rel_diff(r.rhs_whittaker, exact), rel_diff(r.rhs_bessel, exact)});
    });

    const int n = cfg.order ? 1 : cfg.n;
    McConfig mc;
    mc.n_samples = cfg.samples;
    mc.seed = cfg.seed;
    mc.batch = cfg.batch;
    mc.threads = cfg.threads;
    const double mean = n * p.product_mean();
    const double sd = std::sqrt(n * p.product_variance());
    const GridSpec grid{mean - 12.0 * sd, mean + 12.0 * sd, 1001};
    suite.check("monte_carlo.ks[n=" + std::to_string(n) + "]", ks_bound(std::max<std::int64_t>(cfg.samples, 1)),
                [&] { return ks_check(p, n, mc, grid); });
    suite.check("monte_carlo.mean[n=" + std::to_string(n) + "]", 4.0, [&] {
        const MomentCheck mcheck = moment_check(sample_sum(p, n, mc), p, n);
        return std::abs(mcheck.z_score());
    });
    return suite.take();
}

} // namespace corrprod::cli
