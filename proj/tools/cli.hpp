#pragma once

#include <iosfwd>

namespace pmech::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Parses arguments, runs the chosen subcommand and returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pmech::cli
