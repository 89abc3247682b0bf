#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tvyw::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kNumericalError = 3,
};

//! Entry point of the `tvyw` tool. Subcommands: simulate, estimate,
//! forecast, experiment, weights. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tvyw::cli
