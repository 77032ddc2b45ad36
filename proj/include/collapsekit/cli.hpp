// Command-line surface. run_cli is the whole program behind a testable
// interface: the binary's main() only forwards argv and the standard
// streams.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collapsekit {

// Exit codes: 0 success, 1 input/usage error, 2 mathematically undefined
// result surfaced as the top-level output.
int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace collapsekit
