#pragma once

#include <iosfwd>

namespace commlab {

// Exit codes of the command-line runner.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitInvalid = 2, kExitTimeout = 3 };

// `commlab <gen|verify|cover|bounds|am> [args]`. Reports go to `out` unless
// --out is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace commlab
