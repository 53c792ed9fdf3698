#pragma once

#include <iosfwd>

namespace vstates::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kGuard = 3,
    kNumerical = 4,
};

/// Parses argv, runs one subcommand (spectrum, threshold, branch, check,
/// render) and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Smallest multiple of 4 K m that is at least 4096.
int default_quadrature(int K, int m);

} // namespace vstates::cli
