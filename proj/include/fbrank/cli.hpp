#pragma once

// Command-line front end. run_cli is the whole program minus process
// plumbing, so tests can drive it with an argument vector.

#include <iosfwd>
#include <string>
#include <vector>

namespace fbrank {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitBudget = 3 };

// args excludes the program name. The JSON report goes to `out` unless
// --json PATH is given, in which case `out` receives a one-line summary.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace fbrank
