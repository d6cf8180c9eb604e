#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bsc {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_invalid_config = 2,
    exit_dimension = 3,
    exit_io = 4,
};

/// Runs the command line given as argv-style arguments (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bsc
