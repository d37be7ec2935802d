#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace picklab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// Successful run whose report contains a refutation (not PSD, infeasible)
/// or a multiplicativity/annihilation finding.
inline constexpr int kExitRefuted = 2;

/// Runs the pick-lab command line. `args` includes the program name.
/// Reports go to --output when given, otherwise to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace picklab::cli
