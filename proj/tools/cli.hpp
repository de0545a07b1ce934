#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ehencky::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kPropertyViolated = 1,
  kUsage = 2,
  kNoDescent = 3,
  kNotConverged = 4,
};

/// Runs the command line `args` (without the program name); returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ehencky::cli
