#pragma once

namespace cachenet {

// Command-line frontend (gen, solve, simulate, experiment, check).
// Returns 0 on success, 1 on input errors, 2 on infeasible/unstable results.
int run_cli(int argc, const char* const* argv);

}  // namespace cachenet
