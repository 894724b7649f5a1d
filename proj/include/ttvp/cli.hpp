#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttvp::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericalError = 2 };

/// Parses and executes one command line. args excludes the program name.
/// Results go to `out` (or the --out file); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace ttvp::cli
