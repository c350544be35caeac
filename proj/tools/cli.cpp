#include "cli.hpp"

#include <atomic>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrprod/errors.hpp"
#include "corrprod/verify.hpp"
#include "format.hpp"
#include "verify_suite.hpp"

namespace corrprod::cli {

namespace {

using nlohmann::json;

struct Row {
    double x = 0.0;
    EvalResult result;
    std::string status = "ok";
    std::string message;
};

double parse_number(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw_domain("cannot read " + what + " from '" + s + "'");
    return v;
}

json config_json(const CliConfig& c)
{
    json j;
    j["command"] = c.command;
    j["params"] = {{"mu_x", c.params.mu_x},       {"mu_y", c.params.mu_y}, {"sigma_x", c.params.sigma_x},
                   {"sigma_y", c.params.sigma_y}, {"rho", c.params.rho}};
    j["nu"] = c.nu();
    if (!c.order)
        j["n"] = c.n;
    j["method"] = std::string(to_string(c.method));
    j["grid"] = {{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"points", c.grid.points}};
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["batch"] = c.batch;
    j["threads"] = c.threads;
    j["series"] = {{"rel_tol", c.settings.series.rel_tol}, {"max_k", c.settings.series.max_k}};
    j["quad"] = {{"rel_tol", c.settings.quad.target_rel_err}, {"max_refinements", c.settings.quad.max_refinements}};
    j["integral_threshold"] = c.settings.integral_threshold;
    j["divisibility_m"] = c.divisibility_m;
    if (c.check_tol)
        j["check_tol"] = *c.check_tol;
    return j;
}

Row evaluate_row(const CliConfig& c, double x)
{
    Row row;
    row.x = x;
    try {
        if (c.command == "mean")
            row.result = evaluate_mean_density(c.params, c.n, x, c.method, c.settings);
        else
            row.result = evaluate_density(c.params, OrderSpec{c.nu()}, x, c.method, c.settings);
        if (row.result.singular)
            row.status = "singular";
    } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
        row.result.value = std::numeric_limits<double>::quiet_NaN();
        row.result.err_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<Row> evaluate_grid(const CliConfig& c)
{
    std::vector<Row> rows(c.grid.points);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < c.grid.points; i = next++)
            rows[i] = evaluate_row(c, c.grid.at(i));
    };
    const int threads = std::clamp(c.threads, 1, c.grid.points);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    return rows;
}

std::string method_name(const CliConfig& c, const Row& r)
{
    if (r.status == "error")
        return std::string(to_string(c.method));
    return std::string(to_string(r.result.method));
}

int cmd_density(const CliConfig& c, std::ostream& out, std::ostream& err)
{
    const std::vector<Row> rows = evaluate_grid(c);
    bool failed = false;
    for (const Row& r : rows) {
        if (r.status == "error") {
            failed = true;
            err << "x=" << fmt17(r.x) << ": " << r.message << '\n';
        }
    }
    if (c.output == OutputFormat::csv) {
        out << "x,density,err,method,status\n";
        for (const Row& r : rows)
            out << fmt17(r.x) << ',' << fmt17(r.result.value) << ',' << fmt17(r.result.err_estimate) << ','
                << method_name(c, r) << ',' << r.status << '\n';
    } else {
        json j;
        j["metadata"] = config_json(c);
        j["rows"] = json::array();
        for (const Row& r : rows) {
            json row;
            row["x"] = r.x;
            if (r.status == "singular")
                row["density"] = "inf";
            else if (r.status == "error")
                row["density"] = nullptr;
            else
                row["density"] = r.result.value;
            row["err"] = r.status == "ok" ? json(r.result.err_estimate) : json(nullptr);
            row["method"] = method_name(c, r);
            row["status"] = r.status;
            if (!r.message.empty())
                row["message"] = r.message;
            j["rows"].push_back(row);
        }
        out << j.dump(2) << '\n';
    }
    return failed ? kEvaluation : kOk;
}

int cmd_sample(const CliConfig& c, std::ostream& out)
{
    McConfig mc;
    mc.n_samples = c.samples;
    mc.seed = c.seed;
    mc.batch = c.batch;
    mc.threads = c.threads;
    const std::vector<double> samples = sample_sum(c.params, c.n, mc);
    if (c.output == OutputFormat::csv) {
        std::string buf;
        for (double v : samples) {
            buf += fmt17(v);
            buf += '\n';
        }
        out << buf;
    } else {
        json j;
        j["metadata"] = config_json(c);
        j["samples"] = samples;
        out << j.dump(2) << '\n';
    }
    return kOk;
}

int cmd_verify(const CliConfig& c, std::ostream& out, std::ostream& err)
{
    const std::vector<CheckResult> results = run_verify_suite(c);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        if (!r.passed)
            err << "FAILED " << r.name << ": " << fmt17(r.value) << " > " << fmt17(r.threshold)
                << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
    }
    if (c.output == OutputFormat::csv) {
        out << "check,value,threshold,status\n";
        for (const auto& r : results)
            out << r.name << ',' << fmt17(r.value) << ',' << fmt17(r.threshold) << ',' << (r.passed ? "pass" : "fail")
                << '\n';
    } else {
        json j;
        j["metadata"] = config_json(c);
        j["checks"] = json::array();
        for (const auto& r : results) {
            json row = {{"check", r.name}, {"threshold", r.threshold}, {"passed", r.passed}};
            row["value"] = std::isfinite(r.value) ? json(r.value) : json(nullptr);
            if (!r.detail.empty())
                row["detail"] = r.detail;
            j["checks"].push_back(row);
        }
        j["passed"] = all;
        out << j.dump(2) << '\n';
    }
    return all ? kOk : kVerification;
}

} // namespace

GridSpec parse_grid(const std::string& text)
{
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos || text.find(':', b + 1) != std::string::npos)
        throw_domain("grid must look like lo:hi:points, got '" + text + "'");
    GridSpec g;
    g.lo = parse_number(text.substr(0, a), "grid lower end");
    g.hi = parse_number(text.substr(a + 1, b - a - 1), "grid upper end");
    const double pts = parse_number(text.substr(b + 1), "grid point count");
    if (pts != std::floor(pts) || pts > 1e8)
        throw_domain("grid point count must be an integer, got '" + text.substr(b + 1) + "'");
    g.points = static_cast<int>(pts);
    g.validate();
    return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Density of sums and means of products of correlated normal variables"};
    app.name("corrprod");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file mirroring the flags; flags override it");

    CliConfig c;
    std::string grid = "-3:3:7";
    std::string method = "auto";
    std::string output = "csv";
    std::optional<int> n;
    std::optional<double> order;
    std::optional<double> check_tol;

    app.add_option("--mu-x", c.params.mu_x, "mean of X");
    app.add_option("--mu-y", c.params.mu_y, "mean of Y");
    app.add_option("--sigma-x", c.params.sigma_x, "standard deviation of X");
    app.add_option("--sigma-y", c.params.sigma_y, "standard deviation of Y");
    app.add_option("--rho", c.params.rho, "correlation of X and Y");
    auto* n_opt = app.add_option("--n", n, "number of copies (default 1)");
    app.add_option("--order", order, "convolution order nu > 0, fractional allowed (pdf only)")->excludes(n_opt);
    app.add_option("--method", method, "auto, series, integral, cf or closed");
    app.add_option("--grid", grid, "lo:hi:points, endpoints included");
    app.add_option("--output", output, "csv or json");
    app.add_option("--seed", c.seed, "Monte Carlo seed");
    app.add_option("--samples", c.samples, "number of Monte Carlo samples");
    app.add_option("--batch", c.batch, "Monte Carlo batch size");
    app.add_option("--threads", c.threads, "worker threads")->envname("CORRPROD_THREADS");
    app.add_option("--rel-tol", c.settings.series.rel_tol, "series relative tolerance");
    app.add_option("--max-k", c.settings.series.max_k, "series term limit");
    app.add_option("--quad-tol", c.settings.quad.target_rel_err, "quadrature relative tolerance");
    app.add_option("--integral-threshold", c.settings.integral_threshold,
                   "auto uses the integral for |x| >= this times sigma_x sigma_y");
    app.add_option("--divisibility-m", c.divisibility_m, "divisor order checked by verify");
    app.add_option("--check-tol", check_tol, "replace every verification threshold");

    app.add_subcommand("pdf", "density of S_n (or of order nu) on a grid");
    app.add_subcommand("mean", "density of the mean of n copies on a grid");
    app.add_subcommand("sample", "Monte Carlo samples of S_n");
    app.add_subcommand("verify", "run the verification checks; exit 3 if any fails");

    // Term budget of the auto and series paths.
    c.settings.series.max_k = 50000;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        c.command = app.get_subcommands().front()->get_name();
        c.grid = parse_grid(grid);
        c.method = parse_method_choice(method);
        if (output == "csv")
            c.output = OutputFormat::csv;
        else if (output == "json")
            c.output = OutputFormat::json;
        else
            throw_domain("output must be csv or json, got '" + output + "'");
        if (n)
            c.n = *n;
        c.order = order;
        c.check_tol = check_tol;
        if (c.n < 1)
            throw_domain("--n must be >= 1");
        if (c.order && c.command != "pdf" && c.command != "verify")
            throw_domain("--order is only accepted by pdf and verify; use --n for " + c.command);
        if (c.samples < 0)
            throw_domain("--samples must be >= 0");
        if (c.batch < 1)
            throw_domain("--batch must be >= 1");
        if (c.threads < 1)
            throw_domain("--threads must be >= 1");
        if (c.divisibility_m < 1)
            throw_domain("--divisibility-m must be >= 1");
        c.params.validate();
        OrderSpec{c.nu()}.validate();
        c.settings.series.validate();
        c.settings.quad.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        if (c.command == "pdf" || c.command == "mean")
            return cmd_density(c, out, err);
        if (c.command == "sample")
            return cmd_sample(c, out);
        return cmd_verify(c, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kEvaluation;
    }
}

} // namespace corrprod::cli
