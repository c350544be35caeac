#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "oracle_values.hpp"

using namespace corrprod;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "corrprod");
    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
            fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, int col)
{
    std::vector<double> v;
    for (std::size_t i = 1; i < rows.size(); ++i)
        v.push_back(std::stod(rows[i][col]));
    return v;
}

const std::vector<std::string> kGenericFlags{"--mu-x", "1", "--mu-y", "-0.5", "--sigma-x", "2", "--sigma-y", "0.7",
                                             "--rho", "0.3"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& extra)
{
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

} // namespace

TEST_CASE("pdf table at zero means")
{
    const Outcome o = run_cli({"pdf", "--mu-x", "0", "--mu-y", "0", "--sigma-x", "1", "--sigma-y", "1", "--rho", "0",
                               "--n", "1", "--grid", "-3:3:7"});
    REQUIRE(o.code == cli::kOk);
    const auto rows = csv(o.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == std::vector<std::string>{"x", "density", "err", "method", "status"});
    CHECK(rows[5][0] == "1");
    CHECK(std::abs(std::stod(rows[5][1]) - oracle::kK0At1 / M_PI) < 1e-15);
    CHECK(rows[5][4] == "ok");
    CHECK(rows[4][1] == "inf");
    CHECK(rows[4][4] == "singular");
    CHECK(rows[1][1] == rows[7][1]);
}

TEST_CASE("series and integral columns agree")
{
    const auto s = run_cli(with(kGenericFlags, {"pdf", "--n", "2", "--grid", "-6:6:24", "--method", "series"}));
    const auto i = run_cli(with(kGenericFlags, {"pdf", "--n", "2", "--grid", "-6:6:24", "--method", "integral"}));
    REQUIRE(s.code == cli::kOk);
    REQUIRE(i.code == cli::kOk);
    const auto a = column(csv(s.out), 1);
    const auto b = column(csv(i.out), 1);
    REQUIRE(a.size() == 24);
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(std::abs(a[k] - b[k]) < 1e-7 * b[k]);
    CHECK(csv(s.out)[1][3] == "series_general");
    CHECK(csv(i.out)[1][3].starts_with("integral"));
}

TEST_CASE("fractional order and thread count")
{
    const auto one = run_cli(with(kGenericFlags, {"pdf", "--order", "0.5", "--grid", "-4:4:33"}));
    const auto four = run_cli(with(kGenericFlags, {"pdf", "--order", "0.5", "--grid", "-4:4:33", "--threads", "4"}));
    REQUIRE(one.code == cli::kOk);
    CHECK(one.out == four.out);
    for (double v : column(csv(one.out), 1))
        CHECK(v >= 0.0);
}

TEST_CASE("mean table")
{
    const auto pdf = run_cli(with(kGenericFlags, {"pdf", "--n", "1", "--grid", "-3:3:13"}));
    const auto mean = run_cli(with(kGenericFlags, {"mean", "--n", "1", "--grid", "-3:3:13"}));
    REQUIRE(mean.code == cli::kOk);
    CHECK(pdf.out == mean.out);

    // zero means, n = 3: n f_S(n x) with f_S in closed form
    const auto bar = run_cli({"mean", "--n", "3", "--grid", "-10:10:2001"});
    REQUIRE(bar.code == cli::kOk);
    const auto f = column(csv(bar.out), 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        sum += (k == 0 || k + 1 == f.size() ? 0.5 : 1.0) * f[k];
    CHECK(std::abs(sum * 0.01 - 1.0) < 1e-4);

    const auto row = csv(run_cli({"mean", "--n", "3", "--grid", "0.5:1:2"}).out);
    const auto direct = csv(run_cli({"pdf", "--n", "3", "--grid", "1.5:3:2"}).out);
    for (int k = 1; k <= 2; ++k)
        CHECK(std::stod(row[k][1]) == doctest::Approx(3 * std::stod(direct[k][1])).epsilon(1e-14));
}

TEST_CASE("sample command")
{
    const auto a = run_cli(with(kGenericFlags, {"sample", "--n", "2", "--samples", "2000", "--seed", "9"}));
    const auto b = run_cli(
        with(kGenericFlags, {"sample", "--n", "2", "--samples", "2000", "--seed", "9", "--threads", "3", "--batch", "77"}));
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const auto c = run_cli(with(kGenericFlags, {"sample", "--n", "2", "--samples", "2000", "--seed", "10"}));
    CHECK(a.out != c.out);

    std::istringstream in(a.out);
    double v, sum = 0.0;
    int count = 0;
    while (in >> v) {
        sum += v;
        ++count;
    }
    CHECK(count == 2000);
    // n E[Z] = 2 * (-0.5 + 0.42), sd of the mean about 0.05
    CHECK(std::abs(sum / count - 2 * (-0.5 + 0.3 * 2 * 0.7)) < 0.25);

    const auto empty = run_cli({"sample", "--samples", "0"});
    CHECK(empty.code == cli::kOk);
    CHECK(empty.out.empty());
}

TEST_CASE("verify command")
{
    const auto ok = run_cli({"verify", "--divisibility-m", "3"});
    CHECK(ok.code == cli::kOk);
    const auto rows = csv(ok.out);
    bool found = false;
    for (const auto& r : rows) {
        if (r[0] == "divisibility.cf_power[m=3]") {
            found = true;
            CHECK(std::stod(r[1]) < 1e-12);
            CHECK(r[3] == "pass");
        }
    }
    CHECK(found);

    const auto strict = run_cli({"verify", "--check-tol", "1e-30"});
    CHECK(strict.code == cli::kVerification);
    CHECK(strict.out.find(",fail") != std::string::npos);
    CHECK(strict.err.find("triangle.series_integral") != std::string::npos);

    const auto js = run_cli({"verify", "--output", "json"});
    CHECK(js.code == cli::kOk);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["checks"].size() == rows.size() - 1);
}

TEST_CASE("json output")
{
    const auto o = run_cli(with(kGenericFlags, {"pdf", "--n", "2", "--grid", "-1:1:5", "--output", "json"}));
    REQUIRE(o.code == cli::kOk);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["metadata"]["params"]["sigma_y"] == 0.7);
    CHECK(j["metadata"]["n"] == 2);
    CHECK(j["metadata"]["grid"]["points"] == 5);
    CHECK(j["metadata"]["method"] == "auto");
    REQUIRE(j["rows"].size() == 5);
    const auto csv_rows = csv(run_cli(with(kGenericFlags, {"pdf", "--n", "2", "--grid", "-1:1:5"})).out);
    for (int k = 0; k < 5; ++k) {
        CHECK(j["rows"][k]["density"].get<double>() == std::stod(csv_rows[k + 1][1]));
        CHECK(j["rows"][k]["status"] == "ok");
    }
}

TEST_CASE("config file with flag override")
{
    const auto path = std::filesystem::temp_directory_path() / "corrprod_test_config.ini";
    {
        std::ofstream f(path);
        f << "mu-x = 1\nmu-y = -0.5\nsigma-x = 2\nsigma-y = 0.7\nrho = 0.3\nn = 2\ngrid = -1:1:5\n";
    }
    const auto from_file = run_cli({"pdf", "--config", path.string()});
    const auto from_flags = run_cli(with(kGenericFlags, {"pdf", "--n", "2", "--grid", "-1:1:5"}));
    REQUIRE(from_file.code == cli::kOk);
    CHECK(from_file.out == from_flags.out);

    const auto overridden = run_cli({"pdf", "--config", path.string(), "--rho", "-0.2"});
    const auto direct = run_cli({"pdf", "--mu-x", "1", "--mu-y", "-0.5", "--sigma-x", "2", "--sigma-y", "0.7",
                                 "--rho", "-0.2", "--n", "2", "--grid", "-1:1:5"});
    CHECK(overridden.out == direct.out);
    std::filesystem::remove(path);
}

TEST_CASE("validation and evaluation failures")
{
    for (const std::vector<std::string>& bad :
         {std::vector<std::string>{"pdf", "--sigma-x", "-1"}, {"pdf", "--rho", "1.5"}, {"pdf", "--grid", "3:1:5"},
          {"pdf", "--grid", "0:1"}, {"pdf", "--method", "magic"}, {"pdf", "--n", "2", "--order", "1.5"},
          {"pdf", "--n", "0"}, {"mean", "--order", "0.5"}, {"pdf", "--output", "xml"}, {"pdf", "--bogus"},
          {"sample", "--samples", "-3"}, {"pdf", "--threads", "0"}, {"pdf", "--order", "-1"}}) {
        const auto o = run_cli(bad);
        CHECK(o.code == cli::kValidation);
        CHECK(!o.err.empty());
        CHECK(o.err.find('\n') == o.err.size() - 1);
    }

    // cf inversion is refused at nu = 1: rows fail, the table is still written
    const auto o = run_cli({"pdf", "--method", "cf", "--grid", "1:2:2"});
    CHECK(o.code == cli::kEvaluation);
    const auto rows = csv(o.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][4] == "error");
}

TEST_CASE("grid parsing")
{
    const GridSpec g = cli::parse_grid("-2.5:4:14");
    CHECK(g.lo == -2.5);
    CHECK(g.hi == 4.0);
    CHECK(g.points == 14);
    CHECK_THROWS(cli::parse_grid("1:1:1"));
    CHECK_THROWS(cli::parse_grid("0:1:2.5"));
}
