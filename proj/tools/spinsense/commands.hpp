#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spinsense::cli {

/// Parses and dispatches one CLI invocation (args exclude the program name).
/// Exit codes: 0 success, 1 verification/internal failure, 2 usage or config
/// error.
int run_app(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace spinsense::cli
