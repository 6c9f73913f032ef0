#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otk::cli {

/// Exit statuses of the otk command.
enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kUsageOrIoError = 2,
};

/// Run one otk command. args excludes the program name. Artifacts go to
/// --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otk::cli
