#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace recnet {

enum class ExitCode : int { success = 0, usage = 1, config = 2, data = 3, internal = 4 };

/// Runs the command-line interface. Subcommands: build-graph, durations, fit,
/// baseline, multipliers, analyze, synth. Diagnostics go to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default multiplier sizes: 1%, 3%, 5% and 10% of n, rounded, at least 1, deduplicated.
std::vector<std::size_t> default_multiplier_sizes(std::size_t n);

}  // namespace recnet
