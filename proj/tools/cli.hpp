#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDisconnected = 3;
inline constexpr int kExitIo = 4;

/// Runs one command line (without the program name). Machine output goes to
/// `out`, human messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sge::cli
