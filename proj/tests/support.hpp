#pragma once

#include <complex>
#include <random>
#include <vector>

#include "bps/complex_matrix.hpp"
#include "bps/kernels.hpp"
#include "bps/state.hpp"
#include "bps/summation.hpp"

namespace bps::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline std::vector<cplx> random_unit_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> dist;
  std::vector<cplx> v(n);
  NeumaierSum nrm;
  for (auto& z : v) {
    z = cplx{dist(rng), dist(rng)};
    nrm.add(std::norm(z));
  }
  const double inv = 1.0 / std::sqrt(nrm.value());
  for (auto& z : v) z *= inv;
  return v;
}

/// Random complex matrix normalized to unit Frobenius norm (unit total mass).
inline CMatrix random_state_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::normal_distribution<double> dist;
  CMatrix a(n, m);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = cplx{dist(rng), dist(rng)};
  const double f = frobenius_norm(a);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] /= f;
  return a;
}

inline CMatrix outer_product(const std::vector<cplx>& x, const std::vector<cplx>& y,
                             double scale = 1.0) {
  CMatrix a(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) a(i, j) = scale * x[i] * std::conj(y[j]);
  return a;
}

inline CMatrix random_rank1(std::mt19937_64& rng, std::size_t n, std::size_t m,
                            double scale = 1.0) {
  return outer_product(random_unit_vector(rng, n), random_unit_vector(rng, m), scale);
}

/// Random matrix of the given rank (unit Frobenius norm).
inline CMatrix random_rank_r(std::mt19937_64& rng, std::size_t n, std::size_t m,
                             std::size_t r) {
  CMatrix a(n, m);
  for (std::size_t k = 0; k < r; ++k) {
    const auto x = random_unit_vector(rng, n);
    const auto y = random_unit_vector(rng, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) += x[i] * std::conj(y[j]);
  }
  const double f = frobenius_norm(a);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] /= f;
  return a;
}

inline TruncatedState wrap_state(CMatrix m, double tail = 0.0) {
  TruncatedState st;
  st.captured_mass = frobenius_norm_sq(m);
  st.matrix = std::move(m);
  st.tail_op_bound = tail;
  st.source_digest = "test matrix";
  return st;
}

inline double max_entry_diff(const CMatrix& a, const CMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

/// max |U^H U - I| over entries.
inline double orthonormality_defect(const CMatrix& u) {
  const CMatrix g = kernels::gram(u, kernels::ExecPolicy::Serial);
  double d = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      d = std::max(d, std::abs(g(i, j) - (i == j ? cplx{1.0} : cplx{0.0})));
  return d;
}

inline CMatrix reconstruct(const kernels::SvdResult& r) {
  return kernels::outer_sum(r.u, r.v, r.sigma, kernels::ExecPolicy::Serial);
}

inline std::vector<cplx> mat_vec(const CMatrix& m, const std::vector<cplx>& h) {
  std::vector<cplx> out(m.rows(), cplx{0.0});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * h[j];
  return out;
}

inline double vec_norm(const std::vector<cplx>& v) {
  NeumaierSum s;
  for (const cplx& z : v) s.add(std::norm(z));
  return std::sqrt(s.value());
}

/// Bell state as an explicit dense source, amplitudes 1/sqrt(2) on the diagonal.
inline DenseFinite bell_source() {
  DenseFinite d;
  d.rows = d.cols = 2;
  const double a = 0.70710678118654752;
  d.entries[{0, 0}] = a;
  d.entries[{1, 1}] = a;
  return d;
}

/// Bell state with complex amplitudes of exactly representable squared mass
/// (|0.5 + 0.5i|^2 == 0.5), so minors and masses come out exact.
inline DenseFinite bell_exact_source() {
  DenseFinite d;
  d.rows = d.cols = 2;
  d.entries[{0, 0}] = cplx{0.5, 0.5};
  d.entries[{1, 1}] = cplx{0.5, 0.5};
  return d;
}

}  // namespace bps::testing
