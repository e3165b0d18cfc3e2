#pragma once

#include <iosfwd>

namespace corrsim_cli {

// Full CLI entry point, stream-injected so tests can drive it in process.
// Returns the process exit code: 0 success, 2 precondition/contract/protocol
// errors, 3 unknown state id, 4 dimension cap exceeded, 1 unexpected.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace corrsim_cli
