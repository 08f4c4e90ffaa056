#pragma once

#include <optional>
#include <string>

#include "bps/minor_test.hpp"
#include "bps/spectral.hpp"
#include "bps/state.hpp"

namespace bps {

inline constexpr double kDefaultDelta = 1e-6;
inline constexpr double kDefaultSigmaTol = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Evidence {
  Interval sigma2;
  double max_minor = 0.0;
  double tail_op_bound = 0.0;
  std::size_t rows = 0, cols = 0;
  double captured_mass = 0.0;
};

enum class VerdictKind { CertifiedEntangled, SeparableWithin, Inconclusive };

/// Certified classification of the underlying (possibly infinite) state from
/// one truncation. Exactly one kind per analysis; the spectral route is
/// authoritative, the minor route is a mandatory cross-check.
struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double sigma2_lower = 0.0;             // CertifiedEntangled
  double delta = 0.0;                    // SeparableWithin
  std::string reason;                    // Inconclusive
  std::optional<RankOneFactor> factor;   // SeparableWithin
  Evidence evidence;
};

/// Certified interval for the second singular value of the full operator.
Interval sigma2_interval(const TruncatedState& st);

Verdict classify(const TruncatedState& st, double delta = kDefaultDelta,
                 double tol = kDefaultSigmaTol);

struct EntropyResult {
  double entropy_bits = 0.0;
  double unresolved_mass = 0.0;  // 1 - captured_mass, not folded into the entropy
};

/// Entropy of the truncated Schmidt distribution, without renormalization.
EntropyResult entanglement_entropy(const TruncatedState& st);

/// Everything the report needs from a single pass over the state.
struct Analysis {
  SpectralSummary summary;
  Verdict verdict;
  EntropyResult entropy;
};

Analysis analyze(const TruncatedState& st, double delta = kDefaultDelta,
                 double tol = kDefaultSigmaTol);

}  // namespace bps
