#pragma once

// Subcommand dispatch for the scaledyn executable.

#include <ostream>
#include <string>
#include <vector>

namespace scaledyn::cli {

enum ExitCode { exit_ok = 0, exit_tolerance = 1, exit_usage = 2, exit_io = 3 };

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "SCALEDYN_CONFIG";

/// Runs one command line (args[0] is the program name). Data goes to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scaledyn::cli
