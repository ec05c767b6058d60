#ifndef Q3_CLI_HPP
#define Q3_CLI_HPP

#include <ostream>

namespace q3::cli {

// Exit codes: 0 all claims pass, 1 a claim failed or errored, 2 bad usage or an
// unmet precondition, 3 a precision or horizon failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPrecision = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace q3::cli

#endif
