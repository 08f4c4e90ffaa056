#include "bps/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "bps/errors.hpp"
#include "bps/summation.hpp"

namespace bps {

namespace {

double entropy_bits(const std::vector<double>& sigma) {
  NeumaierSum h;
  for (double s : sigma) {
    const double p = s * s;
    if (p > 0.0) h.add(-p * std::log2(p));
  }
  return h.value();
}

double hermiticity_defect(const CMatrix& t) {
  double defect = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = i; j < t.cols(); ++j)
      defect = std::max(defect, std::abs(t(i, j) - std::conj(t(j, i))));
  return defect;
}

}  // namespace

SpectralSummary svd(const TruncatedState& st, kernels::ExecPolicy policy) {
  kernels::SvdResult r = kernels::jacobi_svd(st.matrix, policy);
  SpectralSummary s;
  s.singular_values = std::move(r.sigma);
  s.left_vectors = std::move(r.u);
  s.right_vectors = std::move(r.v);
  s.sigma_intervals.reserve(s.singular_values.size());
  for (double sv : s.singular_values)
    s.sigma_intervals.emplace_back(std::max(0.0, sv - st.tail_op_bound),
                                   sv + st.tail_op_bound);
  s.truncated_entropy = entropy_bits(s.singular_values);
  return s;
}

CMatrix positive_sqrt(const CMatrix& t, kernels::ExecPolicy policy) {
  if (t.rows() != t.cols()) throw StructuralError("positive_sqrt: matrix not square");
  if (t.rows() == 0) throw StructuralError("positive_sqrt: empty matrix");
  if (hermiticity_defect(t) > 1e-10)
    throw StructuralError("positive_sqrt: input not Hermitian within 1e-10");

  const std::size_t m = t.rows();
  CMatrix h(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) h(i, j) = 0.5 * (t(i, j) + std::conj(t(j, i)));

  // Shift to a positive-definite matrix so the one-sided Jacobi engine
  // doubles as a Hermitian eigensolver: eigenvalues are sigma - shift and the
  // right singular vectors are the eigenvectors.
  const double shift = frobenius_norm(h) + 1.0;
  for (std::size_t i = 0; i < m; ++i) h(i, i) += shift;
  kernels::SvdResult eig = kernels::jacobi_svd(h, policy);

  std::vector<double> roots(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double lambda = eig.sigma[k] - shift;
    if (lambda < -1e-10)
      throw StructuralError("positive_sqrt: eigenvalue below -1e-10, input not nonnegative");
    roots[k] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return kernels::outer_sum(eig.v, eig.v, roots, policy);
}

PolarParts polar_decompose(const CMatrix& m, kernels::ExecPolicy policy) {
  kernels::SvdResult r = kernels::jacobi_svd(m, policy);
  const std::size_t k = r.sigma.size();

  PolarParts p;
  p.a = kernels::outer_sum(r.v, r.v, r.sigma, policy);

  const double rank_tol = k == 0 ? 0.0 : kPolarRankTol * r.sigma[0];
  std::vector<double> kept;
  kept.reserve(k);
  for (double s : r.sigma) kept.push_back(s > rank_tol && s > 0.0 ? 1.0 : 0.0);
  p.u = kernels::outer_sum(r.u, r.v, kept, policy);
  return p;
}

PolarParts polar_decompose(const TruncatedState& st, kernels::ExecPolicy policy) {
  return polar_decompose(st.matrix, policy);
}

std::vector<ProfileEntry> convergence_profile(const CoefficientSource& src,
                                              const std::vector<std::size_t>& sizes) {
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i] >= sizes[i + 1])
      throw StructuralError("convergence_profile: sizes must be strictly increasing");
  std::vector<ProfileEntry> out;
  out.reserve(sizes.size());
  for (std::size_t n : sizes) {
    TruncatedState st = truncate(src, n, n);
    kernels::SvdResult r = kernels::jacobi_svd(st.matrix);
    out.push_back({n, std::move(r.sigma), st.tail_op_bound});
  }
  return out;
}

}  // namespace bps
