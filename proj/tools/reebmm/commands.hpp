#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace reebmm::cli {

inline constexpr int kExitOk = 0;
/// An experiment ran but found a violation, or the three-loop sweep found no crossover.
inline constexpr int kExitCheckFailed = 1;
/// Bad flags, unreadable or malformed input.
inline constexpr int kExitParse = 2;
/// Input larger than an exact algorithm accepts.
inline constexpr int kExitGuard = 3;

/// Runs the tool; args[0] is the program name. JSON goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reebmm::cli
