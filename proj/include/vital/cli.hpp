#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vital {

enum CliExit : int {
  kExitOk = 0,
  kExitUsage = 1,   // bad arguments or configuration
  kExitData = 2,    // input or dataset problem
  kExitFailed = 3,  // nothing could be integrated
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vital
