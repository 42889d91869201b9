#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oofa {

/**
 * Command-line entry point. `args` excludes the program name. Returns 0 on
 * success, 1 on validation or runtime failure, 2 on usage errors.
 */
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace oofa
