// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace extbell {

struct SuiteOptions {
    std::string fixtures;           // directory holding scenarios/, behaviours/, inequalities/
    std::set<std::string> skip;     // "quantum" skips the floating-point items; numbers skip items
    std::uint64_t seed = 1;
    unsigned restarts = 16;         // quantum search budget
    unsigned workers = 1;
    std::string out_dir;            // when set, certificates and facet files are written here
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    bool skipped = false;
    double seconds = 0;
    double time_limit = 0;
    std::string detail;  // the re-derived values, or what failed
};

/// Runs the reproduction items 1-10. Every value is recomputed; the fixtures
/// only supply inputs and expected values. An item fails when a check fails,
/// an error is raised, or it exceeds its time limit.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options);

/// One line per item: "[PASS] 3 ... (1.2 s) detail".
std::string format_result(const CriterionResult& r);

}  // namespace extbell
