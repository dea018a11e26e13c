#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctmap {

// Exit status: 0 all audits pass, 1 some audit failed, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

}  // namespace ctmap
