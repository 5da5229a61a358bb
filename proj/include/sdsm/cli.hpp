#pragma once

#include <string>
#include <vector>

namespace sdsm {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;   // unknown flag, bad value, bad config
inline constexpr int kExitIo = 3;      // missing/malformed input, unwritable output
inline constexpr int kExitMismatch = 4;  // compare mode found a difference

// Dispatches the sdsm subcommands (mine, oracle, compare, gen, fwer-sim).
// Never throws; failures are reported on stderr and through the exit code.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without program name

}  // namespace sdsm
