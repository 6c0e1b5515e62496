#pragma once

#include <ostream>

namespace rastab::cli {

enum ExitCode : int { ok = 0, acceptance_mismatch = 1, invalid_input = 2 };

/// Runs the command line `argv`; progress goes to `out`, diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace rastab::cli
