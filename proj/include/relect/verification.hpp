#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relect {

struct VerifyOptions {
    int workers = 0;  // 0 = hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
};

struct VerificationReport {
    std::vector<CriterionResult> criteria;
    std::string text;  // full deterministic report
    bool all_passed = false;
};

// Runs every acceptance criterion at its pinned tolerance and seed. The
// report text is a pure function of the build; the determinism criterion
// recomputes the entire suite and compares byte-for-byte.
VerificationReport run_verification(const VerifyOptions& options = {});

// Convenience wrapper: streams the report, returns all_passed.
bool run_verification(std::ostream& out, const VerifyOptions& options = {});

}  // namespace relect
