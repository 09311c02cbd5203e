#pragma once

#include <string>
#include <vector>

#include "airykit/distributions.hpp"

namespace airykit {

struct CheckResult {
    std::string name;
    std::string routes;
    double value_a = 0.0;
    double value_b = 0.0;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Every deterministic dual-route / oracle consistency check, each reported
/// with the two route values, the discrepancy and the tolerance it is held
/// to.  Monte-Carlo shape checks live in the acceptance suite.
std::vector<CheckResult> run_validation_checks(const EngineOptions& opts);

/// Serialize results as a JSON report.
std::string validation_report_json(const std::vector<CheckResult>& results);

} // namespace airykit
