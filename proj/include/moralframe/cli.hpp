#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moralframe::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailed = 1,
  kUsageError = 2,
  kDataError = 3,
};

// Runs the command line `args` (args[0] is the program name) in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moralframe::cli
