// acceptance harness: one line per criterion, strict tolerances and wall-time
// budgets pinned in src/cli/criteria.cpp; any failure exits nonzero.
#include <cstdio>
#include <cstdlib>

#include "spinlab/criteria.hpp"

int main() {
    using namespace spinlab;
    int failures = 0;
    for (int k = 1; k <= criterion_count(); ++k) {
        criterion_result r = run_criterion(k);
        bool in_budget = r.seconds <= r.budget_seconds;
        bool ok = r.pass && in_budget;
        std::printf("[%s] %d/%d %-20s %6.2fs (budget %.0fs, %zu checks)\n",
                    ok ? "PASS" : "FAIL", r.index, criterion_count(), r.name.c_str(),
                    r.seconds, r.budget_seconds, r.checks.size());
        if (!ok) {
            ++failures;
            if (!r.error.empty()) std::printf("       error: %s\n", r.error.c_str());
            for (const check_item& c : r.checks)
                if (!c.pass)
                    std::printf("       %-40s measured %.6e tolerance %.6e\n", c.name.c_str(),
                                c.measured, c.tolerance);
            if (!in_budget)
                std::printf("       over budget: %.2fs > %.0fs\n", r.seconds,
                            r.budget_seconds);
        }
        std::fflush(stdout);
    }
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %d criteria passed\n", criterion_count());
    return 0;
}
