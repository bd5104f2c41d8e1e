#pragma once

#include <string>
#include <vector>

namespace tenniscast::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The offline property suite over bundled fixtures: Laplacian spectral
/// properties, gradient checks, probability algebra, the Hodge oracle,
/// betting algebra, and whole-pipeline causality. No external data.
std::vector<CheckResult> run_property_suite();

}  // namespace tenniscast::selftest
