#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plsga::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
};

/// Runs `plsga <command> [flags]`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plsga::cli
