#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dadcert::cli {

/// Exit statuses.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kMalformed = 2;
inline constexpr int kGuard = 3;

/// Runs one command: verify | build | components | oracle | replay.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dadcert::cli
