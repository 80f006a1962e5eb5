#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace embezzle::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kResource = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embezzle::cli
