#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vf::cli {

/// Exit codes: 0 success, 1 usage, 2 data, 3 backend, 4 io.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vf::cli
