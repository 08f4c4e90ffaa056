#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bps {

/// Command-line driver. Subcommands: analyze, profile, validate.
/// Exit status: 0 for a separable-within or certified-entangled verdict,
/// 2 for inconclusive, 1 for any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bps
