#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gl3sup {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitVerifyFail = 1, kExitInput = 2, kExitNumeric = 3 };

/// Runs the command-line tool on args (args[0] is the program name). Output goes to `out` unless --out is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gl3sup
