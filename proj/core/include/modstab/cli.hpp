#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "modstab/errors.hpp"

namespace modstab {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitVerificationFailed = 2,
  kExitIndeterminate = 3,
  kExitNumeric = 4,
};

int exit_code(ErrorKind kind) noexcept;

/// Runs `modstab <subcommand> ...`; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace modstab
