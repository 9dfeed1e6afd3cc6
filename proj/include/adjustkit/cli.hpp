#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adjustkit {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Run the tool on already-split arguments (argv[0] excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adjustkit
