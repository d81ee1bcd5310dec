#pragma once

#include <iosfwd>

namespace beamdecay {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< I/O or other runtime failure
  kExitInput = 2,    ///< parse, validation or manifest mismatch
  kExitSolver = 3,
  kExitAudit = 4,    ///< audit violated; the report is still written
};

/// Entry point of the `beamdecay` executable. Reports go to `out`,
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beamdecay
