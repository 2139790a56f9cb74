#pragma once

namespace teamnego {

// Entry point behind the negsim binary. Subcommands: run, gen-scenarios,
// frontier, replay, calibrate. Returns the process exit code: 0 on success,
// 1 when an experiment finished with invariant violations, 2 on bad input.
int run_cli(int argc, const char* const* argv);

}  // namespace teamnego
