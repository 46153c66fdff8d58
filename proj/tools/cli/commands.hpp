#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"

namespace inls::cli {

// Exit codes: 0 success, 1 domain failure (hypothesis/solver/contradiction),
// 2 configuration or precondition errors.
int cmd_check(const RunConfig& rc);
int cmd_ground_state(const RunConfig& rc);
int cmd_evolve(const RunConfig& rc);
int cmd_classify(const RunConfig& rc);
int cmd_sweep(const RunConfig& rc);
int cmd_report(const RunConfig& rc);

// Full driver: parses argv, loads the config, applies flag overrides, runs the
// subcommand. Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace inls::cli
