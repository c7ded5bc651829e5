#pragma once

#include <iosfwd>

namespace momentcut {

/// Exit status: 0 success, 1 input or validation error, 2 precondition
/// violation, 3 internal failure. Output paths given as "-" go to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace momentcut
