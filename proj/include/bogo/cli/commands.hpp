#pragma once

#include <iosfwd>
#include <string>

#include "bogo/cli/config.hpp"
#include "bogo/cli/emit.hpp"

namespace bogo::cli {

// Result of one subcommand. Check-style subcommands clear `passed` when a
// configured tolerance is violated; dispatch then exits with 2.
struct CommandOutput {
  Table table;
  bool passed = true;
  std::string message;
};

CommandOutput run_subcommand(const RunConfig& config);

// Full command-line entry: exit 0 on success, 1 on a validation error
// (including usage errors), 2 on a numerical failure or failed check.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bogo::cli
