#pragma once

#include <string>
#include <vector>

namespace sozloc {

// Full command-line dispatch. Returns the process exit code:
// 0 success, 1 usage error, 2 data error, 3 numeric error.
int run_cli(const std::vector<std::string>& args);

}  // namespace sozloc
