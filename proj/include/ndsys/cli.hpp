#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ndsys::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kVerificationFailure = 3 };

/// Runs one command line (without the program name). The JSON report goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ndsys::cli
