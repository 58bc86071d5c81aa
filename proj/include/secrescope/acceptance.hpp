#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secrescope {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool check_passed = false;  // numerical check only
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;

    bool passed() const { return check_passed && seconds <= budget_seconds; }
};

struct AcceptanceOptions {
    std::ostream* log = nullptr;  // per-check progress lines
    int workers = 1;
};

// Criteria 1..8. Throws std::out_of_range for other ids.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

// "criterion 3 cross-engine: PASS (412.3 s of 900 s) <detail>"
std::string format_result(const CriterionResult& r);

// Special-function spot values and the sampler KS battery; returns true when
// everything passes.
bool run_selfcheck(std::ostream& out);

}  // namespace secrescope
