#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fm {

/// Exit codes of the fmcc driver.
enum ExitCode : int {
    kExitOk = 0,
    kExitViolations = 1,  // validation violations or oracle mismatch
    kExitParse = 2,
    kExitSimulation = 3,
    kExitUsage = 4,
};

/// Runs fmcc with `args` (program name excluded). `in` backs the "-" path.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace fm
