#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbforms::cli {

/// Exit codes: 0 success (or the checked inequality holds), 1 usage or
/// input error, 2 a checked inequality or bound was violated.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Runs one command. args excludes the program name. Relative output paths
/// are resolved against $CBFORMS_OUT_DIR when it is set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbforms::cli
