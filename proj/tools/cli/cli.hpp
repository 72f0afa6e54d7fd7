#pragma once

#include <iosfwd>

namespace gyule::cli {

// Exit codes: 0 success, 2 usage error, 3 domain, fit or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gyule::cli
