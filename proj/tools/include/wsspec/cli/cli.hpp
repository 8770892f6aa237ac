#ifndef WSSPEC_CLI_CLI_HPP
#define WSSPEC_CLI_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace wsspec::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInternalConsistency = 3,
  kNoConsistentEigenvalue = 4,
  kInvariantFailure = 5,
};

/// Runs ws-spectra with `args` (program name excluded). Data goes to `out`
/// unless --out is given; diagnostics always go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

} // namespace wsspec::cli

#endif
