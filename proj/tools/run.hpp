#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace quasifree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Identifies the program and build in every artifact.
nlohmann::json provenance(const RunConfig& cfg);

/// Executes one task. Data go to cfg.output_path (or `out` when unset); a file
/// output in CSV format gets a `<path>.provenance.json` sidecar, JSON output
/// embeds the record. Returns the exit status; library exceptions propagate.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Command-line entry point: parses flags, applies them over the config file,
/// runs the task and maps failures to exit codes.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasifree::cli
