#ifndef WB_CLI_HPP
#define WB_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace wb {

/// Runs one workbench command (args excludes the program name) and writes the
/// human-readable report to `out`. With --json <path>, the machine-readable
/// record (for `dynamics`, the emitted certificate) is written there as well.
/// Identical arguments, config and seed produce byte-identical output.
///
/// Exit codes: 0 all expectations met, 1 counterexample found (with replay
/// data), 2 budget exhausted, 3 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

} // namespace wb

#endif
