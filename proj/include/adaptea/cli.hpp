#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adaptea::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFlagged = 2;

/// Entry point behind the `adaptea` executable. `args` excludes the program
/// name. Returns 0 on success, 1 on usage or input errors, 2 when a
/// verification scenario flagged an estimate beyond its bound.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adaptea::cli
