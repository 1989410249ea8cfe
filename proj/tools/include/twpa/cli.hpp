#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twpa::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2 };

/// Runs one command line (without the program name). Verdicts and automata go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twpa::cli
