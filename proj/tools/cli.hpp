#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace algbundle::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kPreconditionError = 2,
  kNonConvergence = 3,
};

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out`, diagnostics and usage text to `err`; `in` backs the "-" path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace algbundle::cli
