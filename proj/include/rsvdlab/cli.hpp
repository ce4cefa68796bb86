#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsvdlab {

// Exit codes of the rsvdlab command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitConfig = 3,
  kExitCheckpoint = 4,
};

// Runs the tool with argv[1..] in `args`. JSON goes to `out`, diagnostics to
// `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsvdlab
