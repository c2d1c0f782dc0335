#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nmopso::cli {

/// Process exit codes.
enum ExitCode : int {
    ok = 0,
    empty_front = 2,
    infeasible_path = 3,
    usage = 64,
    data_error = 65,
    cannot_write = 66,
};

/// Entry point shared by the executable and the tests. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace nmopso::cli
