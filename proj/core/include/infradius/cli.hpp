#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infradius {

// Command-line front end. Exit codes: 0 success, 2 input/validation error
// (message on err), 3 optimizer non-convergence (best-so-far still printed).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infradius
