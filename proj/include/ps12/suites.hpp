#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ps12 {

struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteConfig {
    std::uint64_t seed = 1;
    double tol_override = 0.0;       // 0 = keep each check's default
    long oracle_samples = 1000000;   // Monte Carlo sample count
    double fd_step = 1e-5;           // finite-difference step (relative)
};

/// pou, marsden, boundary, smoothness, independence, stability, oracle,
/// insertion, derivative.
const std::vector<std::string>& suite_names();

/// Runs one named verification suite; throws std::invalid_argument for an
/// unknown name.  Deterministic for a fixed config.
std::vector<CheckResult> run_suite(const std::string& name,
                                   const SuiteConfig& config);

inline bool all_pass(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace ps12
