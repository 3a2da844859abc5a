#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppc {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes: 0 success, 1 usage error, 2 numeric or precision failure.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2 };

/// Runs the `ppc` command line. `args` excludes the program name. Errors
/// are reported as a single JSON line on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppc
