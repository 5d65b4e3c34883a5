#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wft {

/// Runs one wftool command; args excludes the program name. Writes JSON to
/// `out` and returns 0, or writes {"error":code,...} to `out` and returns 1 on
/// domain errors and 2 on malformed input or arguments. Help goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wft
