#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qgraph::cli {

enum ExitCode { Pass = 0, Fail = 1, InputError = 2, Undecided = 3 };

// Runs the command line (args excludes the program name). Reports go to out,
// diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qgraph::cli
