#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corealm::cli {

/// Runs one command line (args[0] is the program name). Returns 0 on
/// success, 1 on a domain error and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corealm::cli
