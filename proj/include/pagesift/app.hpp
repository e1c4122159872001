#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "pagesift/error.hpp"

namespace pagesift::app {

inline constexpr std::string_view kToolName = "pagesift";
inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitDegenerateLabels = 3,
  kExitBindFailure = 4,
};

int exit_code_for(ErrorKind kind);

/// Parses and runs one command line. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pagesift::app
