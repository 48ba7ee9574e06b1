#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tropos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitResolution = 3;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitUsage = 64;

/// Runs one invocation; args[0] is the program name.  Results go to --out
/// or `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

/// Resolves a data file: as given, then under $TROPOS_DATA_DIR, then the
/// build-time data directory.
std::string resolve_data_file(const std::string& name);

}  // namespace tropos::cli
