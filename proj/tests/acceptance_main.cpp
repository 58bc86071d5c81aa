// Runs acceptance criteria 1..8 and prints one PASS/FAIL line each.
// Optional arguments select a subset of criterion ids.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "secrescope/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8};

    secrescope::AcceptanceOptions opt;
    if (const char* v = std::getenv("ACCEPTANCE_VERBOSE"); v && *v == '1') opt.log = &std::cerr;

    int failed = 0;
    for (int id : ids) {
        auto r = secrescope::run_criterion(id, opt);
        std::cout << format_result(r) << std::endl;
        if (!r.passed()) ++failed;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
