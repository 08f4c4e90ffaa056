#pragma once

#include <string>

#include "bps/state.hpp"

namespace bps {

/// Parses the line-oriented `bps 1` state-file format. Throws ParseError with
/// a 1-based line number on malformed input.
CoefficientSource parse_state_file(const std::string& text);

/// Canonical emission; parse(emit(s)) == s and emit is byte-deterministic.
std::string emit_state_file(const CoefficientSource& src);

}  // namespace bps
