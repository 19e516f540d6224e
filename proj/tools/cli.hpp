#pragma once

#include <iosfwd>

namespace coherent {

/// Exit codes: 0 all checks pass, 1 a property check failed, 2 invalid input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coherent
