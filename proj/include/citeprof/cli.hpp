#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace citeprof::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kMissingData = 3, kInternal = 4 };

/// Entry point of the `citeprof` tool. Returns the process exit code.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace citeprof::cli
