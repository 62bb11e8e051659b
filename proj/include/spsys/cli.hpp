#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spsys {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUsage = 2;

/// Runs `spsys <args...>` (args exclude the program name). The JSON report
/// goes to `out`, the human summary and diagnostics to `err`; "-" reads a
/// document from `in`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace spsys
