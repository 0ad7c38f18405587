#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minkowski::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNotCertified = 3;

// Runs one command line (without the program name). Results go to `out`,
// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minkowski::cli
