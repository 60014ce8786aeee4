#pragma once

#include <iosfwd>

namespace lwhac {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

/// Entry point of the lwhac tool; subcommands cluster, cut, bench, convert.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lwhac
