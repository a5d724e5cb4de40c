#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cutpoint {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,       // domain or usage error
  kExitViolation = 3,   // assumption-violation report (document still emitted)
};

/// Runs one CLI invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cutpoint
