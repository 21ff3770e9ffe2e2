#pragma once

#include <ostream>

namespace conan {

enum ExitCode : int {
  kExitOk = 0,
  kExitFindings = 1,
  kExitUsage = 2,
  kExitFatal = 3,
};

/// Runs the analyzer as a command-line tool. The summary (one line per
/// finding) goes to `out`, diagnostics and errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace conan
