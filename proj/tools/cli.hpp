#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cartankit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNotCartan = 2,
  kVerificationFailure = 3,
  kBranchCut = 4,
};

/// Runs the command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartankit::cli
