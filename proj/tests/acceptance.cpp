// Acceptance gate: each check prints one PASS/FAIL line; exit 0 iff all pass.
// Run with an index argument (1-based) to execute a single check.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dualmink/selfcheck.hpp"

namespace {

void print_line(const dualmink::CheckResult& r, int index, int total) {
    std::printf("[%2d/%d] %s %s (%.1fs)%s%s\n", index, total, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.empty() ? "" : " — ", r.detail.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    const int total = dualmink::acceptance_check_count();
    if (argc > 1) {
        const int idx = std::atoi(argv[1]);
        const auto r = dualmink::run_acceptance_check(idx);
        print_line(r, idx, total);
        return r.pass ? 0 : 1;
    }
    bool all = true;
    for (int i = 1; i <= total; ++i) {
        const auto r = dualmink::run_acceptance_check(i);
        print_line(r, i, total);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
