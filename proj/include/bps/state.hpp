#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bps/complex_matrix.hpp"

namespace bps {

/// Explicit finite coefficient sequence. Indices beyond the list are zero.
struct ExplicitSeq {
  std::vector<cplx> values;
  bool operator==(const ExplicitSeq&) const = default;
};

/// a_k = first * ratio^k, k from 0. Square-summable iff |ratio| < 1.
struct GeometricSeq {
  cplx first;
  cplx ratio;
  bool operator==(const GeometricSeq&) const = default;
};

using SequenceSpec = std::variant<ExplicitSeq, GeometricSeq>;

/// Explicit finite amplitude matrix, optionally with a declared residual mass
/// living outside the listed entries.
struct DenseFinite {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::map<std::pair<std::size_t, std::size_t>, cplx> entries;
  double declared_tail = 0.0;
  bool operator==(const DenseFinite&) const = default;
};

/// a_ij = x_i * conj(y_j).
struct OuterProduct {
  SequenceSpec x_seq;
  SequenceSpec y_seq;
  bool operator==(const OuterProduct&) const = default;
};

/// a_ij = delta_ij * c_i with nonnegative real c_i.
struct SchmidtDiagonal {
  SequenceSpec coeffs;
  bool operator==(const SchmidtDiagonal&) const = default;
};

/// a_ij = delta_ij * sqrt(1 - lambda^2) * lambda^i, lambda in [0, 1).
struct TwoModeSqueezed {
  double lambda = 0.0;
  bool operator==(const TwoModeSqueezed&) const = default;
};

using CoefficientSource =
    std::variant<DenseFinite, OuterProduct, SchmidtDiagonal, TwoModeSqueezed>;

struct ValidationReport {
  bool passed = false;
  double total_mass = 0.0;
};

/// Finite window of an amplitude matrix together with a certified bound on the
/// operator norm of what was cut away. Immutable after construction.
struct TruncatedState {
  CMatrix matrix;
  double captured_mass = 0.0;
  double tail_op_bound = 0.0;
  std::string source_digest;
};

inline constexpr std::size_t kDefaultElementBudget = std::size_t{1} << 25;
inline constexpr double kDefaultMassTol = 1e-9;

/// Checks well-formedness (throws StructuralError) and measures total squared
/// mass against 1. Closed-form families are summed analytically.
ValidationReport validate_source(const CoefficientSource& src, double tol = kDefaultMassTol);

/// Materializes the upper-left n x m window. The tail bound is computed from
/// analytic tail masses, never by subtracting a floating partial sum from 1.
TruncatedState truncate(const CoefficientSource& src, std::size_t n, std::size_t m,
                        std::size_t element_budget = kDefaultElementBudget);

/// Certified tail bound for an n x m truncation, without materializing it.
double analytic_tail_bound(const CoefficientSource& src, std::size_t n, std::size_t m);

/// (n, tail_op_bound) for each size; sizes must be strictly increasing.
std::vector<std::pair<std::size_t, double>> tail_profile(const CoefficientSource& src,
                                                         const std::vector<std::size_t>& sizes);

/// One-line description used in digests and reports.
std::string describe_source(const CoefficientSource& src);

}  // namespace bps
