#pragma once

#include <string>
#include <vector>

namespace qnoise {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Fast invariant checks over the library, used by `qnoise selftest`.
std::vector<CheckResult> run_selftest(int threads = 1);

}  // namespace qnoise
