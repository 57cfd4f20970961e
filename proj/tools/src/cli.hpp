#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace khess::cli {

/// Output directory when --out-dir is not given; falls back to ".".
inline constexpr const char* kOutDirEnv = "KHESS_OUT_DIR";

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // ran, but a requested check did not pass
  kUsage = 2,        // bad arguments or input outside the domain
  kFault = 3,        // integration fault or I/O failure
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khess::cli
