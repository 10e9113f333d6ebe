#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace survtest::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kDegenerate = 3,
};

/// Entry point for `survtest <test|simulate|pvalue> ...`. `args` excludes the
/// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace survtest::cli
