#pragma once

#include <iosfwd>

namespace imkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCalibration = 4;

/// Entry point of the imkit command-line tool. Results go to `out` unless
/// --out names a file; messages go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imkit
