#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bps/complex_matrix.hpp"
#include "bps/kernels.hpp"
#include "bps/state.hpp"

namespace bps {

/// Schmidt data of a truncation. Each singular value carries a certified
/// interval of radius tail_op_bound covering the corresponding singular value
/// of the untruncated operator.
struct SpectralSummary {
  std::vector<double> singular_values;  // nonincreasing
  CMatrix left_vectors;                 // n x k, orthonormal columns
  CMatrix right_vectors;                // m x k, orthonormal columns
  std::vector<std::pair<double, double>> sigma_intervals;
  double truncated_entropy = 0.0;  // -sum sigma^2 log2 sigma^2, bits
};

struct PolarParts {
  CMatrix a;  // m x m Hermitian nonnegative, positive square root of M^H M
  CMatrix u;  // n x m partial isometry with u * a = M
};

/// Relative kernel threshold for the polar partial isometry.
inline constexpr double kPolarRankTol = 1e-10;

SpectralSummary svd(const TruncatedState& st,
                    kernels::ExecPolicy policy = kernels::ExecPolicy::Auto);

/// Positive square root of a Hermitian nonnegative matrix. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything more negative is an error, as is
/// a Hermiticity defect above 1e-10.
CMatrix positive_sqrt(const CMatrix& t,
                      kernels::ExecPolicy policy = kernels::ExecPolicy::Auto);

PolarParts polar_decompose(const CMatrix& m,
                           kernels::ExecPolicy policy = kernels::ExecPolicy::Auto);
PolarParts polar_decompose(const TruncatedState& st,
                           kernels::ExecPolicy policy = kernels::ExecPolicy::Auto);

struct ProfileEntry {
  std::size_t n = 0;
  std::vector<double> singular_values;
  double tail_op_bound = 0.0;
};

/// Square-truncation spectra at increasing sizes, with their tail bounds.
std::vector<ProfileEntry> convergence_profile(const CoefficientSource& src,
                                              const std::vector<std::size_t>& sizes);

}  // namespace bps
