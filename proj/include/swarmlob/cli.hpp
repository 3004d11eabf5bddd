#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swarmlob::cli {

// Exit statuses of `run`.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kNotConverged = 2;

// Environment variable naming the directory used when --out is omitted.
inline constexpr const char* kOutputDirEnv = "SWARMLOB_OUTPUT_DIR";

// Parses `args` (without the program name), runs the subcommand, writes its
// output files and prints a one-line summary to `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarmlob::cli
