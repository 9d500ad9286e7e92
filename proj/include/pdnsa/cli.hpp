#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pdnsa {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitConfig = 3 };

/// Runs one `pdnsa` invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdnsa
