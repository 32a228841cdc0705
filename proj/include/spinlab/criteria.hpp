#pragma once
#include <string>
#include <vector>

#include "spinlab/report.hpp"

namespace spinlab {

// One end-to-end acceptance criterion: a named bundle of checks plus a wall
// time budget. `seconds` carries the real measurement for the harness; the
// appended "runtime_budget" check masks it to 0 so serialized reports stay
// byte-identical across runs.
struct criterion_result {
    int index = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;
    std::vector<check_item> checks;
    std::string error; // nonempty when an exception escaped the criterion body
};

int criterion_count();
criterion_result run_criterion(int k, unsigned seed = 12345);
std::vector<criterion_result> run_all_criteria(unsigned seed = 12345);

} // namespace spinlab
