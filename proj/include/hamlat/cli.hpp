#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hamlat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one hamlat command; args excludes the program name.
/// Exit codes: 0 success, 1 verification failure, 2 usage, input or resource error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamlat::cli
