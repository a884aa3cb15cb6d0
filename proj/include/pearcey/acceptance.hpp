#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pearcey {

inline constexpr int kCriterionCount = 12;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // one line: the measured quantities against their bounds
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
};

// Runs one acceptance criterion (1..12). Library errors are caught and reported
// as a failure with the error text in detail.
CriterionResult run_criterion(int id);
// All criteria in order when ids is empty.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

// "PASS [ 7] name: detail (1.2 s)"
std::string format_result_line(const CriterionResult& r);

}  // namespace pearcey
