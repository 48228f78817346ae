#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qten {

// Runs one subcommand. Returns 0 on success, 1 when a predicate command
// run with --strict decides false, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qten
