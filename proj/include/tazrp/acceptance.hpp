#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tazrp {

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    bool quick = false;  // scaled-down sample sizes; thresholds unchanged
    double alpha = 0.01;
    std::vector<int> only;  // empty means every criterion
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;  // one line: measured values against thresholds
    nlohmann::json stats;
    double seconds = 0.0;
};

inline constexpr int kCriteria = 15;

// Runs the selected criteria in order; on_result fires as each finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts);

}  // namespace tazrp
