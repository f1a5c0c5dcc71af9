#pragma once

#include "onesided/config.hpp"
#include "onesided/report.hpp"

namespace onesided {

struct RunOptions {
    int jobs = 1;  // worker threads for independent cases; assembly stays ordered
};

/// Execute the selected suites per configured grid size and assemble the
/// machine-readable report. Invalid configurations and failed hypothesis
/// checks throw (ConfigInvalid / HypothesisFailure); assertion failures are
/// reported through the pass flags.
VerificationReport run_suite(const ExperimentConfig& config, const RunOptions& opts = {});

}  // namespace onesided
