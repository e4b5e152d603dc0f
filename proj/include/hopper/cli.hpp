#pragma once

#include <ostream>

namespace hopper::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitEscape = 3,
  kExitNonConvergence = 4,
  kExitIo = 5,
};

/// Runs the command line in-process. Human-readable summaries go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopper::cli
