#pragma once

#include <string>
#include <vector>

namespace choquard {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs one of the invariant suites: "pohozaev", "gradient", "polarization",
/// "riesz", "path" or "all". Throws ConfigInvalid on unknown names.
std::vector<CheckResult> run_verify_suite(const std::string& suite);

} // namespace choquard
