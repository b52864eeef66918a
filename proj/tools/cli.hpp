#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clockaug::cli {

enum ExitCode : int
{
  exit_ok        = 0,
  exit_violation = 1,
  exit_usage     = 2,
};

/// Runs one subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace clockaug::cli
