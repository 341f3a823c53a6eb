#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cirsolve {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitYes = 0,       ///< success, or "yes" for check
    kExitNo = 1,        ///< "no" for check, or no consistent sample exists
    kExitUsage = 2,     ///< bad arguments or a solver used outside its scope
    kExitParse = 3,     ///< malformed input document, FD text, DIMACS or edge list
    kExitBudget = 4,    ///< an exponential solver would exceed its budget
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cirsolve
