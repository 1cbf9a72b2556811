#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace bayesens {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2, kExitData = 3, kExitNonConvergence = 4 };

/// Command-line entry point. Subcommands: sim-conservative, sim-dissipative,
/// gen-returns, fit-variance, compare-models, ingest. Data goes to files under
/// --out (and summaries to `out`); diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bayesens
