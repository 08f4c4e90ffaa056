#pragma once

#include <string>

#include "bps/certify.hpp"

namespace bps {

enum class ReportFormat { Text, Json };

/// Renders an analysis. Numbers are serialized with 17 significant digits so
/// the JSON round-trips doubles exactly and output is byte-deterministic.
/// At most 16 singular values are listed unless `full` is set.
std::string emit_report(const Analysis& analysis, ReportFormat format, bool full = false);

}  // namespace bps
