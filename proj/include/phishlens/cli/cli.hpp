#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phishlens::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kExitDecode = 4;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics and run headers to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phishlens::cli
