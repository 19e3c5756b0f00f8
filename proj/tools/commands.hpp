#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pointerlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kSummarySchemaVersion = 1;

/// Runs the command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pointerlab::cli
