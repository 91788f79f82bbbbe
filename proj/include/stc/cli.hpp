#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stc {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitInternal = 2 };

/// Runs one `stc` invocation. `args` excludes the program name. Normal output
/// goes to `out`, diagnostics and usage text to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stc
