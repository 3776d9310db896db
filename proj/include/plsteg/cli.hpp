#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plsteg::cli {

enum class ExitCode : int {
  Ok = 0,
  Usage = 1,
  CapacityExceeded = 2,
  UnsupportedFormat = 3,
  IoError = 4,
  InvalidPls = 5,
  DecryptionFailed = 6,
  PayloadCorrupt = 7,
  DimensionMismatch = 8,
};

/// Runs one command line. `args` excludes the program name. Diagnostics go
/// to `err`; results (decoded messages without --out, reports) go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plsteg::cli
