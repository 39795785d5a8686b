#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `hcol` tool. args excludes the program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcol
