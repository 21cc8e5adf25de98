#pragma once

#include <iosfwd>

namespace lplab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `lplab` tool, writing to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace lplab
