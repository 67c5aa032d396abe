#pragma once

#include <string>
#include <vector>

namespace cfmetrics::cli {

// Parses and executes one subcommand. Returns the process exit status:
// 0 on success, 1 for runtime failures (I/O, violated preconditions),
// 2 for usage errors. `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace cfmetrics::cli
