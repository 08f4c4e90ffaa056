#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bps/complex_matrix.hpp"

namespace bps::kernels {

/// Execution policy for the compute kernels. Every kernel has a serial
/// reference implementation and an OpenMP one; `Auto` switches on problem
/// size. Results are deterministic per policy (the parallel variants schedule
/// work so that no floating-point reduction order depends on thread count).
enum class ExecPolicy { Auto, Serial, Parallel };

/// Size thresholds above which Auto resolves to Parallel.
inline constexpr std::size_t kMatmulParallelFlops = std::size_t{1} << 18;
inline constexpr std::size_t kMinorParallelQuads = std::size_t{1} << 16;
inline constexpr std::size_t kJacobiParallelCols = 48;

bool resolved_parallel(ExecPolicy policy, std::size_t work, std::size_t threshold);

/// C = A * B.
CMatrix matmul(const CMatrix& a, const CMatrix& b, ExecPolicy policy = ExecPolicy::Auto);

/// Gram matrix M^H * M (Hermitian by construction).
CMatrix gram(const CMatrix& m, ExecPolicy policy = ExecPolicy::Auto);

/// Weighted sum of outer products: C = sum_k w[k] * a_k * b_k^H, where a_k and
/// b_k run over the first w.size() columns of `a` and `b`.
CMatrix outer_sum(const CMatrix& a, const CMatrix& b, const std::vector<double>& w,
                  ExecPolicy policy = ExecPolicy::Auto);

struct MinorWitness {
  std::size_t i = 0, j = 0, k = 0, l = 0;  // rows i<j, cols k<l
  bool operator==(const MinorWitness&) const = default;
};

struct MinorScanResult {
  double value = 0.0;
  std::optional<MinorWitness> witness;
};

/// Exhaustive scan of all 2x2 subdeterminants: returns the maximum magnitude
/// and a witness attaining it (ties broken toward the lexicographically
/// smallest index quadruple, so the result is schedule-independent).
MinorScanResult minor_scan(const CMatrix& m, ExecPolicy policy = ExecPolicy::Auto);

struct SvdResult {
  CMatrix u;                  // n x k, orthonormal columns
  std::vector<double> sigma;  // k = min(n, m), nonincreasing
  CMatrix v;                  // m x k, orthonormal columns
  int sweeps = 0;
};

/// One-sided Jacobi SVD. The serial variant sweeps column pairs cyclically;
/// the parallel variant runs a round-robin tournament whose rounds touch
/// disjoint column pairs, so it is bitwise reproducible for any thread count.
/// Phase convention: the first significant entry of each left vector is real
/// and positive.
SvdResult jacobi_svd(const CMatrix& m, ExecPolicy policy = ExecPolicy::Auto);

}  // namespace bps::kernels
