#pragma once

#include <iosfwd>

namespace mdbench {

/// Command-line entry point. Returns 0 on success, 2 on a usage error
/// (message on `err`), 1 on a runtime failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdbench
