#pragma once

#include <iosfwd>

namespace nlaffine {

/// Entry point of the nlaffine tool. Returns the process exit code:
/// 0 ok, 1 validation reject, 2 config, 3 regime, 4 numerical.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlaffine
