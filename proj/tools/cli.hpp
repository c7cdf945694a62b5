#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Exit codes: 0 success, 2 usage or configuration
// error, 3 model-domain error, 4 estimation or convergence error.

namespace qperc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitEstimation = 4;

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Parses `args` (without the program name) and runs the chosen subcommand.
/// Table output goes to --out when given, otherwise to `out`; diagnostics go
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qperc::cli
