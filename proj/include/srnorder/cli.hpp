#pragma once

#include <iosfwd>

namespace srnorder {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // invalid structure or violations found
inline constexpr int kExitUsage = 2;    // usage, input or parse errors

/// Entry point of `srn-order`; all output goes to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srnorder
