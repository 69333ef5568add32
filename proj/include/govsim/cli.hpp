#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace govsim::cli {

/// Entry point behind the govsim binary. `args` excludes the program name.
/// Returns the process exit code: 0 success, 2 config or input errors,
/// 1 anything else.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace govsim::cli
