#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gibbs/harness/config.hpp"

namespace gibbs::harness {

struct RunReport {
  Json summary;
  std::vector<std::filesystem::path> artifacts;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  ///< seconds; not written to any artifact
};

/// Runs the experiment and writes its artifacts, summary.json and
/// resolved_config.json into config.output_dir (created if needed).
/// Library errors are rethrown with the experiment name prepended, keeping
/// their type.
RunReport run(const ExperimentConfig& config);

}  // namespace gibbs::harness
