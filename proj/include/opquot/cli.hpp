#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opquot::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kPreconditionViolated = 2,
    kParseError = 3,
};

/// Runs the CLI on `args` (args[0] is the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace opquot::cli
