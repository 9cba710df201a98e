#pragma once

#include <iosfwd>

namespace ergoalloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;        // infeasible plan, parse or usage error
inline constexpr int kExitMissing = 2;        // missing profile, file or executions
inline constexpr int kExitNotConverged = 3;   // calibration did not reach its target

/// Runs the command line tool. Output directory defaults to $ERGOALLOC_OUT_DIR,
/// then the working directory.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergoalloc
