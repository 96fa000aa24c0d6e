#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alignfluct {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitSelfTestFailed = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

/// Runs `alignfluct <command> ...`; args excludes the program name. Reports go
/// to `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alignfluct
