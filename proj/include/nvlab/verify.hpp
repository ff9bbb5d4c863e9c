#pragma once
// The `verify` suite: every module's hard asserts bundled as named checks.
// `quick` runs the fast subset; `full` runs everything (the whole-artifact
// gate, minutes of work).

#include <string>
#include <vector>

namespace nvlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // one line; failure reason or key numbers
    double seconds = 0.0;
};

// level: "quick" | "full". Never throws for check failures (they are
// reported in the results); throws UsageError for an unknown level.
std::vector<CheckResult> run_verification(const std::string& level, unsigned threads = 0);

} // namespace nvlab
