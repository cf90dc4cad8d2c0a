#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spoc {

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2 };

// args excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace spoc
