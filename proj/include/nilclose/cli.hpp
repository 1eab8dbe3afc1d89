#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilclose {

/// Runs the nilclose command line.  args excludes the program name.
/// Exit codes: 0 success (negative decisions are printed, not signaled),
/// 2 usage or input error, 3 resource-cap error, 1 unexpected failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace nilclose
