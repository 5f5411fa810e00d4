#pragma once

#include <string>
#include <vector>

namespace dualmink {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

// End-to-end checks with pinned instances and tolerances; shared by the
// acceptance test binary and the CLI selftest command.
int acceptance_check_count();
std::string acceptance_check_name(int index); // 1-based
CheckResult run_acceptance_check(int index);  // 1-based; never throws
std::vector<CheckResult> run_all_acceptance_checks();

} // namespace dualmink
