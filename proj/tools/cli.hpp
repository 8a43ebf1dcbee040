#pragma once

#include <ostream>

namespace copath::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,
  kUsage = 2,
  kBackendFailure = 3,
};

/// Runs one command line. Payloads go to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copath::cli
