#pragma once

// Invariant and acceptance batteries shared by `teig verify` and the
// acceptance binary. Every tolerance, trial count and seed is fixed here.

#include <iosfwd>
#include <string>
#include <vector>

namespace teig {

struct CheckResult {
    /// 1..12 for acceptance criteria, 0 for supporting invariants.
    int criterion = 0;
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const;
};

inline constexpr int kCriterionCount = 12;

/// Runs acceptance criterion k (1-based). Throws ValidationError for k out of range.
CheckResult run_criterion(int k);

/// algebra, spectra, inequalities, solvers, experiments.
const std::vector<std::string>& suite_names();
/// Throws ValidationError for an unknown suite.
SuiteReport run_suite(const std::string& name);

/// One JSON document with suite, overall status and every check.
void write_report_json(std::ostream& os, const SuiteReport& report);

} // namespace teig
