#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kscars/error.hpp"

namespace kscars {

/// Exit statuses of the command-line front end.
enum ExitStatus : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitSize = 3,
  kExitInvalidState = 4,
  kExitConfiguration = 5,
  kExitPrecondition = 6,
  kExitDomain = 7,
  kExitConvergence = 8,
  kExitIo = 9,
};

int exit_status(ErrorKind kind) noexcept;

/// Default artifact directory: $KSCARS_OUTPUT_DIR, else the working directory.
inline constexpr const char* kOutputDirEnv = "KSCARS_OUTPUT_DIR";

/// Runs one subcommand. `args` excludes the program name. Results go to `out`,
/// a one-line JSON error to `err` on failure.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kscars
