#pragma once

#include <string>
#include <vector>

namespace loosecore {

/// Entry point behind the `loosecore` command-line tool. Subcommands:
/// generate, core, predict, experiment, extremal, scan. Returns 0 on
/// success, 1 on a usage error, 2 on a runtime error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace loosecore
