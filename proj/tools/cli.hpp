#pragma once

// Command-line front end: match, eval, synth and align subcommands.

#include "fpmatch/core_model.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fpmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// Applies `key = value` lines to `cfg`. Keys are the MatchConfig field
/// names; `thresholds` takes a comma-separated list. Blank lines and lines
/// starting with '#' are ignored. Throws ConfigError on unknown keys or bad
/// values.
void apply_config_text(MatchConfig& cfg, std::string_view text);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpmatch::cli
