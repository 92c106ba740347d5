#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnsat::cli {

// Exit codes of `solve`.
inline constexpr int kSolved = 10;
inline constexpr int kExhausted = 20;
inline constexpr int kError = 1;
// `analyze` exits with this when a verification check fails.
inline constexpr int kCheckFailed = 2;

/// Runs the command line `bnsat <args...>`; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace bnsat::cli
