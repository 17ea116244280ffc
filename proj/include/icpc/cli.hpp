#pragma once

namespace icpc {

// Batch entry point behind the icpctool binary. Returns the process exit
// code: 0 success, 1 validation/usage error, 2 runtime or numerical error.
int run_cli(int argc, const char* const* argv);

}  // namespace icpc
