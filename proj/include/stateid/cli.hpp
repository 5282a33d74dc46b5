#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stateid {

/// Exit codes: 0 success, 1 a verification failed, 2 bad input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

/// Entry point of the `stateid` tool. `argv[0]` is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, with arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stateid
