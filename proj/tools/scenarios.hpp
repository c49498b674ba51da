#pragma once

#include <iosfwd>

#include "config.hpp"

namespace rnls::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverFailure = 3, kBlowup = 4 };

/// Executes the scenario, writing artifacts and manifest.json into
/// config.out_dir. Progress lines go to `log`. Solver exceptions propagate.
int run(const ExperimentConfig& config, std::ostream& log);

/// Writes the validation report to `log`; returns kOk or kConfigError.
int report_validation(const ExperimentConfig& config, std::ostream& log);

}  // namespace rnls::cli
