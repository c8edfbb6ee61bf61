#pragma once

#include <iosfwd>

namespace tsra::cli {

/// Entry point of the `tsra` command. Exit codes: 0 success, 1 config or
/// usage error, 2 contract violation, 3 acceptance failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsra::cli
