#pragma once
#include <iosfwd>

namespace gnat {

// Runs the `gnat` command line. Reports go to `out` on success and to `err` on failure.
// Exit codes: 0 success, 2 precondition / not-applicable / bad input, 1 internal error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gnat
