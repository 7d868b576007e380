#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metricdiv {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitInvalidMetric = 3,
  kExitTooLarge = 4,
};

/// Runs the tool on `args` (without the program name). Data goes to `out`
/// unless --output is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metricdiv
