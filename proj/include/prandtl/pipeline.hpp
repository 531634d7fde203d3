#pragma once

#include <string>

#include "prandtl/config.hpp"

namespace prandtl {

struct PipelineResult {
  int exit_code = 0;
  std::string summary_path;
};

// Executes the configured command and writes the output tree; exit code is
// nonzero iff a gating audit failed.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace prandtl
