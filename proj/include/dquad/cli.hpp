#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dquad::cli {

// Runs the command-line tool on `args` (program name excluded), writing
// normal output to `out` and problems to `err`. Returns the process exit
// code: 0 success, 1 verification failure, 2 usage or parse error,
// 3 numerical non-convergence.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dquad::cli
