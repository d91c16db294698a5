#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace krank {

struct AcceptanceConfig {
    // Caps every grid at n = 10^4 instead of 10^5.
    bool quick = false;
    unsigned threads = 0;
    std::filesystem::path cache;
    // Skip criterion 11's nested timing of a quick run.
    bool skip_nested_timing = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs every acceptance criterion in order, invoking `on_result` as each
/// one finishes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceConfig& config,
    const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& result);

}  // namespace krank
