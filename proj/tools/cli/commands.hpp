#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dng::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitCheckFailed = 2,
  kExitDiverged = 3,
};

// Runs one subcommand (gen-data, train, eval, gradcheck, oracle-check, bench).
// `args` excludes the program name. Messages go to `out` / `err`; the return
// value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dng::cli
