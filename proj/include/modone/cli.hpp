#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modone {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

// Subcommands gen, stat, exp and check. `args` excludes the program name.
// Result records go to `out` one per line; diagnostics go to `err` as a
// single line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modone
