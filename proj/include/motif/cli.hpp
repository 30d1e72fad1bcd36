#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace motif::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kInputError = 2;
inline constexpr int kCapacityError = 3;

/// Runs the command line (args excludes the program name). JSON goes to
/// out, the human-readable summary and diagnostics to err.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

} // namespace motif::cli
