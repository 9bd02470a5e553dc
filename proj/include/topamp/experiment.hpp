// experiment.hpp — configuration-driven experiment runner

#pragma once

#include <string>
#include <vector>

#include "topamp/config.hpp"
#include "topamp/table.hpp"

namespace topamp::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  int threads = 1;
  bool strict = false;  // fail on the first grid-point error instead of flagging
};

struct RunOutcome {
  std::vector<ResultTable> tables;
  bool partial = false;  // some grid points failed and were skipped
  std::vector<std::string> errors;
};

// Executes the configured experiment. Grid-point failures are recorded and the
// run continues unless opts.strict is set (then the error propagates).
RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

}  // namespace topamp::cli
