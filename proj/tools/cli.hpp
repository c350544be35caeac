#pragma once

// Command-line front end: pdf, mean, sample and verify subcommands.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "corrprod/dispatch.hpp"
#include "corrprod/types.hpp"

namespace corrprod::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kEvaluation = 2,
    kVerification = 3,
};

enum class OutputFormat { csv, json };

struct CliConfig {
    std::string command;
    BivariateParams params{};
    /// Exactly one of n (copies) or order (any nu > 0) is active.
    int n = 1;
    std::optional<double> order;
    MethodChoice method = MethodChoice::automatic;
    GridSpec grid{-3.0, 3.0, 7};
    OutputFormat output = OutputFormat::csv;
    std::uint64_t seed = 0x5eed;
    std::int64_t samples = 100000;
    std::int64_t batch = 8192;
    int threads = 1;
    EvalSettings settings{};
    int divisibility_m = 2;
    /// Replaces every verification threshold when set.
    std::optional<double> check_tol;

    double nu() const { return order ? *order : static_cast<double>(n); }
};

GridSpec parse_grid(const std::string& text);

/// Full CLI; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace corrprod::cli
