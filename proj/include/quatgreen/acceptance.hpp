#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace quatgreen {

inline constexpr int kCriteriaCount = 10;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string summary;  ///< one-line metric digest
    nlohmann::json metrics;
};

struct AcceptanceOptions {
    int workers = 1;
    std::uint64_t seed = 20240611;
};

/// Runs criterion `id` in [1, kCriteriaCount]. Exceptions inside a criterion
/// are reported as a failure with the error text in `summary`.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

/// Runs `ids` (all criteria when empty) in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {}, const std::vector<int>& ids = {});

/// "PASS [3] scattering_closed_form (1.2 s): ..."
std::string format_line(const CriterionResult& r);

nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace quatgreen
