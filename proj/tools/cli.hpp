#pragma once

#include <ostream>

namespace minface::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSpecError = 2, kNumericFailure = 3 };

/// Runs one subcommand: sample, singular, classify, curvature, conjugate,
/// verify or gallery. `--spec gallery:NAME` selects a built-in surface.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minface::cli
