#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iadof::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kRefused = 3,
  kVerificationFailed = 4,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iadof::cli
