#pragma once

#include <string>
#include <vector>

namespace ellipcmr {

struct CheckLine {
    std::string label;
    double value = 0.0;
    double tol = 0.0;

    bool pass() const { return value <= tol; }
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckLine> lines;

    bool pass() const;
    double max_residual() const;
};

// kernel-identity runs only (n, m) when both are set, else the full set
struct SuiteConfig {
    double ell = 1.0;
    double p = 0.05;
    double g = 1.6;
    int n = -1;
    int m = -1;
    double tol = 1e-8;
};

// heat, quasi-periodicity, limits, kernel-identity, duality, calogero-trick,
// nonstationary-theta-power
const std::vector<std::string>& suite_names();

// Throws ErrorCode::domain for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

} // namespace ellipcmr
