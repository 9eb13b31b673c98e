#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skygs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skygs::cli
