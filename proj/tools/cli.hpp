#pragma once

#include <atomic>
#include <ostream>

namespace mpcf::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kDivergent = 3,
  kInterrupted = 130,
};

/// Entry point of the `mpcf` tool. Matrix/PCF output goes to --output or to
/// `out`; diagnostics and progress go to `err`. When `interrupt` becomes true
/// a running matrix job is cancelled, nothing is written, and the exit code
/// is kInterrupted.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* interrupt = nullptr);

} // namespace mpcf::cli
