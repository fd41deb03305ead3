#pragma once

namespace oval {

/// Command-line entry: parses one subcommand of {orbit, rotation, basin,
/// certify, threshold, phase}, merges --config file settings with flag
/// overrides (flags win) and writes artifacts under --out. Returns 0 on
/// success, 1 on configuration errors, 2 on numerical failure.
int run_cli(int argc, char** argv);

}  // namespace oval
