// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Optional arguments select criteria by number.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "pearcey/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= pearcey::kCriterionCount; ++i) ids.push_back(i);
    int failed = 0;
    for (int id : ids) {
        const pearcey::CriterionResult r = pearcey::run_criterion(id);
        std::printf("%s\n", pearcey::format_result_line(r).c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(ids.size()) - failed, ids.size());
    return failed ? 1 : 0;
}
