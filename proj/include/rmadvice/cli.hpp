#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace rmadvice {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `rmadvice` tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Hex SHA-1 of the git blob object holding `content`.
std::string git_blob_sha1(std::string_view content);

}  // namespace rmadvice
