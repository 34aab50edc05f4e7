#pragma once

#include <iosfwd>

namespace linespec::cli {

/// Entry point of the `linespec` command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linespec::cli
