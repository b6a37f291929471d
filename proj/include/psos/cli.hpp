#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace psos {

/// Command-line front end.  `args` excludes the program name.
/// Exit codes: 0 success, 2 invalid arguments or domain violations,
/// 3 non-convergence, precision exhaustion or enumeration caps.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psos
