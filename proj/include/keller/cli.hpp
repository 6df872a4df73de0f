#pragma once

#include <ostream>

namespace keller {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitVerification = 1, kExitUsage = 2 };

/// Parses argv, runs one subcommand and writes its artifact to `out` (or to --output-dir).
/// Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace keller
