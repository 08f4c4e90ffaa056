#include "bps/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "bps/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bps::kernels {

namespace {

constexpr double kJacobiConvergence = 1e-15;  // relative off-diagonal target
constexpr int kJacobiMaxSweeps = 64;
constexpr double kSigmaZero = 1e-300;  // below this a column counts as zero

}  // namespace

bool resolved_parallel(ExecPolicy policy, std::size_t work, std::size_t threshold) {
#ifdef _OPENMP
  if (policy == ExecPolicy::Serial) return false;
  if (policy == ExecPolicy::Parallel) return true;
  return work >= threshold;
#else
  (void)policy;
  (void)work;
  (void)threshold;
  return false;
#endif
}

// ---------------------------------------------------------------------------
// matmul

namespace {

inline void matmul_row(const CMatrix& a, const CMatrix& b, CMatrix& c, std::size_t i) {
  for (std::size_t j = 0; j < b.cols(); ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
    c(i, j) = acc;
  }
}

}  // namespace

CMatrix matmul(const CMatrix& a, const CMatrix& b, ExecPolicy policy) {
  if (a.cols() != b.rows()) throw StructuralError("matmul: shape mismatch");
  CMatrix c(a.rows(), b.cols());
  const std::size_t flops = a.rows() * a.cols() * b.cols();
  if (resolved_parallel(policy, flops, kMatmulParallelFlops)) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.rows()); ++i)
      matmul_row(a, b, c, static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, c, i);
  }
  return c;
}

// ---------------------------------------------------------------------------
// gram

namespace {

inline void gram_row(const CMatrix& m, CMatrix& g, std::size_t a) {
  for (std::size_t b = a; b < m.cols(); ++b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) acc += std::conj(m(i, a)) * m(i, b);
    g(a, b) = acc;
    g(b, a) = std::conj(acc);
  }
}

}  // namespace

CMatrix gram(const CMatrix& m, ExecPolicy policy) {
  CMatrix g(m.cols(), m.cols());
  const std::size_t flops = m.cols() * m.cols() * m.rows() / 2;
  if (resolved_parallel(policy, flops, kMatmulParallelFlops)) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(m.cols()); ++a)
      gram_row(m, g, static_cast<std::size_t>(a));
  } else {
    for (std::size_t a = 0; a < m.cols(); ++a) gram_row(m, g, a);
  }
  return g;
}

// ---------------------------------------------------------------------------
// outer_sum

namespace {

inline void outer_sum_row(const CMatrix& a, const CMatrix& b, const std::vector<double>& w,
                          CMatrix& c, std::size_t i) {
  for (std::size_t j = 0; j < b.rows(); ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      acc += w[k] * a(i, k) * std::conj(b(j, k));
    c(i, j) = acc;
  }
}

}  // namespace

CMatrix outer_sum(const CMatrix& a, const CMatrix& b, const std::vector<double>& w,
                  ExecPolicy policy) {
  if (w.size() > a.cols() || w.size() > b.cols())
    throw StructuralError("outer_sum: more weights than columns");
  CMatrix c(a.rows(), b.rows());
  const std::size_t flops = a.rows() * b.rows() * std::max<std::size_t>(w.size(), 1);
  if (resolved_parallel(policy, flops, kMatmulParallelFlops)) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(a.rows()); ++i)
      outer_sum_row(a, b, w, c, static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < a.rows(); ++i) outer_sum_row(a, b, w, c, i);
  }
  return c;
}

// ---------------------------------------------------------------------------
// minor scan

namespace {

struct MinorBest {
  double value = -1.0;  // below any |det| so the first quadruple always wins
  MinorWitness w;

  // Total order: larger value wins, ties go to the smaller index quadruple.
  bool better_than(const MinorBest& o) const {
    if (value != o.value) return value > o.value;
    auto key = [](const MinorWitness& t) { return std::array{t.i, t.j, t.k, t.l}; };
    return key(w) < key(o.w);
  }
};

inline void minor_scan_rowpair(const CMatrix& m, std::size_t i, std::size_t j,
                               MinorBest& best) {
  for (std::size_t k = 0; k + 1 < m.cols(); ++k) {
    const cplx mik = m(i, k), mjk = m(j, k);
    for (std::size_t l = k + 1; l < m.cols(); ++l) {
      const double v = std::abs(mik * m(j, l) - m(i, l) * mjk);
      MinorBest cand{v, {i, j, k, l}};
      if (cand.better_than(best)) best = cand;
    }
  }
}

}  // namespace

MinorScanResult minor_scan(const CMatrix& m, ExecPolicy policy) {
  if (m.rows() < 2 || m.cols() < 2) return {};
  const std::size_t quads =
      (m.rows() * (m.rows() - 1) / 2) * (m.cols() * (m.cols() - 1) / 2);
  MinorBest best;
  if (resolved_parallel(policy, quads, kMinorParallelQuads)) {
#pragma omp parallel
    {
      MinorBest local;
#pragma omp for schedule(dynamic) nowait
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.rows()) - 1; ++i)
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < m.rows(); ++j)
          minor_scan_rowpair(m, static_cast<std::size_t>(i), j, local);
#pragma omp critical
      if (local.value >= 0.0 && local.better_than(best)) best = local;
    }
  } else {
    for (std::size_t i = 0; i + 1 < m.rows(); ++i)
      for (std::size_t j = i + 1; j < m.rows(); ++j) minor_scan_rowpair(m, i, j, best);
  }
  return {best.value, best.w};
}

// ---------------------------------------------------------------------------
// one-sided Jacobi SVD

namespace {

// Orthogonalizes columns p and q of w (and applies the same rotation to v).
// Returns true if a rotation was applied.
bool rotate_pair(CMatrix& w, CMatrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = w.rows();
  double alpha = 0.0, beta = 0.0;
  cplx gamma = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    alpha += std::norm(w(i, p));
    beta += std::norm(w(i, q));
    gamma += std::conj(w(i, p)) * w(i, q);
  }
  if (alpha == 0.0 || beta == 0.0) return false;
  const double g = std::abs(gamma);
  if (g <= kJacobiConvergence * std::sqrt(alpha) * std::sqrt(beta)) return false;

  // Diagonalize the 2x2 Gram block [[alpha, gamma], [conj(gamma), beta]].
  const cplx phase = std::conj(gamma) / g;
  const double tau = (beta - alpha) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;
  const cplx us = phase * s;
  const cplx uc = phase * c;

  for (std::size_t i = 0; i < n; ++i) {
    const cplx wp = w(i, p), wq = w(i, q);
    w(i, p) = c * wp - us * wq;
    w(i, q) = s * wp + uc * wq;
  }
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const cplx vp = v(i, p), vq = v(i, q);
    v(i, p) = c * vp - us * vq;
    v(i, q) = s * vp + uc * vq;
  }
  return true;
}

// Serial reference: cyclic-by-rows ordering.
int sweep_cyclic(CMatrix& w, CMatrix& v) {
  int rotations = 0;
  for (std::size_t p = 0; p + 1 < w.cols(); ++p)
    for (std::size_t q = p + 1; q < w.cols(); ++q)
      if (rotate_pair(w, v, p, q)) ++rotations;
  return rotations;
}

// Parallel sweep: round-robin tournament. Each round pairs every column at
// most once, so rotations within a round touch disjoint data and the result
// does not depend on the number of threads.
int sweep_round_robin(CMatrix& w, CMatrix& v) {
  const std::size_t m = w.cols();
  const std::size_t players = m + (m % 2);  // pad to even with a bye
  int rotations = 0;
  for (std::size_t round = 0; round + 1 < players; ++round) {
    int round_rot = 0;
#pragma omp parallel for schedule(static) reduction(+ : round_rot)
    for (std::int64_t game = 0; game < static_cast<std::int64_t>(players / 2); ++game) {
      std::size_t a, b;
      if (game == 0) {
        a = players - 1;
        b = round;
      } else {
        const std::size_t g = static_cast<std::size_t>(game);
        a = (round + g) % (players - 1);
        b = (round + players - 1 - g) % (players - 1);
      }
      if (a >= m || b >= m) continue;  // bye
      if (rotate_pair(w, v, std::min(a, b), std::max(a, b))) ++round_rot;
    }
    rotations += round_rot;
  }
  return rotations;
}

// Appends an orthonormal completion vector (orthogonal to the first `have`
// columns of u) into column `slot`. Deterministic: greedy over the standard
// basis with two rounds of Gram-Schmidt.
void complete_basis_column(CMatrix& u, std::size_t have, std::size_t slot) {
  const std::size_t n = u.rows();
  std::vector<cplx> cand(n), best(n);
  double best_nrm2 = -1.0;
  for (std::size_t e = 0; e < n; ++e) {
    std::fill(cand.begin(), cand.end(), cplx{0.0});
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < have; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, k)) * cand[i];
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, k);
      }
    }
    double nrm2 = 0.0;
    for (const cplx& x : cand) nrm2 += std::norm(x);
    if (nrm2 > best_nrm2) {
      best_nrm2 = nrm2;
      best = cand;
    }
    if (best_nrm2 > 0.25) break;  // good enough, stop scanning
  }
  // A free direction always exists (have < n), with residual mass >= 1/n
  // spread over the basis probes.
  if (best_nrm2 <= 1e-12) throw ConsistencyError("svd: basis completion failed");
  const double inv = 1.0 / std::sqrt(best_nrm2);
  for (std::size_t i = 0; i < n; ++i) u(i, slot) = best[i] * inv;
}

// SVD for n >= m. Returns thin factors with k = m columns.
SvdResult jacobi_svd_tall(const CMatrix& a, bool parallel) {
  const std::size_t n = a.rows(), m = a.cols();
  CMatrix w = a;
  CMatrix v = CMatrix::identity(m);

  int sweeps = 0;
  while (true) {
    const int rotations = parallel ? sweep_round_robin(w, v) : sweep_cyclic(w, v);
    ++sweeps;
    if (rotations == 0) break;
    if (sweeps >= kJacobiMaxSweeps) throw ConsistencyError("svd: no convergence");
  }

  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j) {
    NeumaierSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(std::norm(w(i, j)));
    norms[j] = std::sqrt(s.value());
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult r;
  r.sweeps = sweeps;
  r.sigma.resize(m);
  r.u = CMatrix(n, m);
  r.v = CMatrix(m, m);
  std::size_t filled = 0;
  std::vector<std::size_t> empty_slots;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = order[k];
    r.sigma[k] = norms[j];
    for (std::size_t i = 0; i < m; ++i) r.v(i, k) = v(i, j);
    if (norms[j] > kSigmaZero) {
      for (std::size_t i = 0; i < n; ++i) r.u(i, k) = w(i, j) / norms[j];
      filled = k + 1;
    } else {
      r.sigma[k] = 0.0;
      empty_slots.push_back(k);
    }
  }
  for (std::size_t slot : empty_slots) {
    complete_basis_column(r.u, filled, slot);
    filled = std::max(filled, slot + 1);
  }
  return r;
}

void canonicalize_phases(SvdResult& r) {
  const std::size_t n = r.u.rows();
  for (std::size_t k = 0; k < r.sigma.size(); ++k) {
    double maxabs = 0.0;
    for (std::size_t i = 0; i < n; ++i) maxabs = std::max(maxabs, std::abs(r.u(i, k)));
    if (maxabs == 0.0) continue;
    std::size_t lead = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(r.u(i, k)) >= 1e-8 * maxabs) {
        lead = i;
        break;
      }
    }
    const cplx ph = std::conj(r.u(lead, k)) / std::abs(r.u(lead, k));
    for (std::size_t i = 0; i < n; ++i) r.u(i, k) *= ph;
    for (std::size_t i = 0; i < r.v.rows(); ++i) r.v(i, k) *= ph;
  }
}

}  // namespace

SvdResult jacobi_svd(const CMatrix& m, ExecPolicy policy) {
  if (m.rows() == 0 || m.cols() == 0) throw StructuralError("svd: empty matrix");
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag()))
      throw StructuralError("svd: non-finite entry");

  const bool parallel =
      resolved_parallel(policy, std::min(m.rows(), m.cols()), kJacobiParallelCols);
  SvdResult r;
  if (m.rows() >= m.cols()) {
    r = jacobi_svd_tall(m, parallel);
  } else {
    SvdResult t = jacobi_svd_tall(adjoint(m), parallel);
    r.u = std::move(t.v);
    r.v = std::move(t.u);
    r.sigma = std::move(t.sigma);
    r.sweeps = t.sweeps;
  }
  canonicalize_phases(r);
  return r;
}

}  // namespace bps::kernels
