#pragma once

#include <iosfwd>

namespace tss {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the `tateshift` tool. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tss
