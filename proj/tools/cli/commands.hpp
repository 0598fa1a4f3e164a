#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace newton_flow::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_parse = 2,
    exit_domain = 3,
    exit_numerical = 4,
    exit_verification = 5,
};

/// Runs one `newton-flow` invocation. `args` excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newton_flow::cli
