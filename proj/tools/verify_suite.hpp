#pragma once

#include <string>
#include <vector>

#include "cli.hpp"

namespace corrprod::cli {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

/// Oracle triangle, normalization, divisibility, Fourier integrals, Monte
/// Carlo. A check that throws is recorded as failed with the message.
std::vector<CheckResult> run_verify_suite(const CliConfig& cfg);

} // namespace corrprod::cli
