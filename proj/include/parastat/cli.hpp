#pragma once

#include <iosfwd>

namespace parastat::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kResource = 3 };

// Entry point of the `parastat` tool; reports go to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parastat::cli
