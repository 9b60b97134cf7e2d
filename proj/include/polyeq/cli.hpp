#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyeq::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kNegativeVerdict = 1,
  kInputError = 2,
  kNumericFailure = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics (including the violation list of a rejected metric) to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyeq::cli
