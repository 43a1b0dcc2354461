#pragma once

#include <iosfwd>

namespace logbench::cli {

/// Entry point of the `logbench` tool. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace logbench::cli
