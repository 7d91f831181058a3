#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace betamix {

/// Outcome of one randomized property suite.
///
/// `worst_margin` is the worst observed slack: for inequality suites the
/// maximum of (lhs - rhs) over all checks (non-positive means the
/// inequality held strictly), for equality suites the maximum absolute
/// deviation. A trial fails when its margin exceeds the suite tolerance.
struct SuiteReport {
    std::string suite;
    int trials = 0;
    int failures = 0;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    /// Informational events that are logged rather than failed (e.g.
    /// per-set lower-bound exceptions outside the asserted instances).
    std::vector<std::string> notes;

    bool passed() const { return failures == 0; }
};

/// Suite names accepted by run_suite, in documented order:
/// transforms, expectation, theorem1, determinant, dpp-bounds, lower-bound.
const std::vector<std::string>& verify_suite_names();

/// Run one named randomized suite with its own generator seeded by `seed`.
/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed);

SuiteReport run_transforms_suite(int trials, std::uint64_t seed);
SuiteReport run_expectation_suite(int trials, std::uint64_t seed);
SuiteReport run_theorem1_suite(int trials, std::uint64_t seed);
SuiteReport run_determinant_suite(int trials, std::uint64_t seed);
SuiteReport run_dpp_bounds_suite(int trials, std::uint64_t seed);
SuiteReport run_lower_bound_suite(int trials, std::uint64_t seed);

}  // namespace betamix
