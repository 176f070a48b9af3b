#pragma once

namespace helmddm {

/// Entry point for the command-line driver. Returns the process exit code:
/// 0 success, 2 configuration error, 3 solver non-convergence, 4 IO error.
int run_cli(int argc, char** argv);

}  // namespace helmddm
