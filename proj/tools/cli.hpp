#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace construct::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Schema version stamped on JSON reports written by the tool.
inline constexpr int kReportSchemaVersion = 1;

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace construct::cli
