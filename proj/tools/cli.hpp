#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fermirep::cli {

enum ExitCode : int {
  kPass = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kIo = 3,
};

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fermirep::cli
