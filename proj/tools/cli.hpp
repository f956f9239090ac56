#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace procmat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Relative --out paths are resolved against this directory when it is set.
inline constexpr const char* kOutputDirEnv = "PROCMAT_OUTPUT_DIR";

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace procmat::cli
