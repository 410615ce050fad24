#pragma once

#include <iosfwd>

namespace tlo::cli {

/// Exit codes: 0 success, 1 a verification suite failed, 2 bad input or
/// runtime error. Nothing is written when the code is 2.
enum ExitCode : int { ok = 0, verification_failed = 1, error = 2 };

/// Entry point of the `tlo` tool. Messages go to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tlo::cli
