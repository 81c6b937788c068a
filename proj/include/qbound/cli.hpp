#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbound::cli {

// Exit codes of the command-line frontend.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // domain, usage, parse and bind errors
inline constexpr int kExitIo = 2;

// Runs one invocation. args[0] is the program name. Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbound::cli
