#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sudlerlab {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitSuiteFailed = 1,
  kExitUsage = 2,
  kExitBudget = 3,
  kExitPrecision = 4,
  kExitError = 5,
};

// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sudlerlab
