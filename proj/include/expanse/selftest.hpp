#pragma once

#include <string>
#include <vector>

namespace expanse {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;  ///< first failure messages, empty when passed
};

/// Runs every invariant suite. `quick` shrinks the grids (< 10 s wall time);
/// `inject_fault` flips a sign inside one closed-form comparison so the
/// reporting path itself can be exercised.
std::vector<SuiteResult> run_selftest(bool quick, bool inject_fault = false);

}  // namespace expanse
