#pragma once

namespace reachopt::driver {

// Subcommands: run, metrics, train-link, serve-oracle, export-dist,
// conformance. Returns 0 on success, 2 on usage or config errors, 1 on
// runtime errors; failures print one diagnostic line to stderr.
int cli_main(int argc, char** argv);

}  // namespace reachopt::driver
