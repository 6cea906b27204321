#pragma once

#include <iosfwd>

namespace liegen {

/// Full command-line driver, separated from main() so tests can invoke it
/// in-process. Returns the process exit code:
///   0 success, 2 parse/usage error, 3 generators do not generate,
///   4 chart solve failed, 5 net coverage not reached, 6 recurrence search
///   budget exhausted, 7 verify mismatch, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace liegen
