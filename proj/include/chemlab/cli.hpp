#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chemlab {

/// The chemlab command line. args[0] is the program name.
/// Returns the exit code: 0 ok, 1 input error, 2 internal error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace chemlab
