#ifndef CONCEPTID_CLI_HPP
#define CONCEPTID_CLI_HPP

#include <iosfwd>

namespace conceptid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `conceptid` tool. Never throws; maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace conceptid

#endif
