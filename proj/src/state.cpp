#include "bps/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bps/errors.hpp"
#include "bps/summation.hpp"

namespace bps {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- sequence helpers -------------------------------------------------------

void check_sequence(const SequenceSpec& seq, bool nonneg_real, const char* name) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) {
    if (ex->values.empty())
      throw StructuralError(std::string(name) + ": empty sequence");
    for (cplx v : ex->values) {
      if (!finite(v)) throw StructuralError(std::string(name) + ": non-finite value");
      if (nonneg_real && (v.imag() != 0.0 || v.real() < 0.0))
        throw StructuralError(std::string(name) + ": coefficients must be nonnegative reals");
    }
  } else {
    const auto& g = std::get<GeometricSeq>(seq);
    if (!finite(g.first) || !finite(g.ratio))
      throw StructuralError(std::string(name) + ": non-finite parameter");
    if (std::abs(g.ratio) >= 1.0)
      throw StructuralError(std::string(name) + ": |ratio| must be < 1");
    if (nonneg_real &&
        (g.first.imag() != 0.0 || g.first.real() < 0.0 || g.ratio.imag() != 0.0 ||
         g.ratio.real() < 0.0))
      throw StructuralError(std::string(name) + ": coefficients must be nonnegative reals");
  }
}

double seq_total_mass(const SequenceSpec& seq) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) {
    NeumaierSum s;
    for (cplx v : ex->values) s.add(std::norm(v));
    return s.value();
  }
  const auto& g = std::get<GeometricSeq>(seq);
  const double q = std::norm(g.ratio);
  return std::norm(g.first) / (1.0 - q);
}

// Squared mass of indices >= k, in closed form for geometric tails.
double seq_tail_mass(const SequenceSpec& seq, std::size_t k) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) {
    NeumaierSum s;
    for (std::size_t i = k; i < ex->values.size(); ++i) s.add(std::norm(ex->values[i]));
    return s.value();
  }
  const auto& g = std::get<GeometricSeq>(seq);
  const double q = std::norm(g.ratio);
  return std::norm(g.first) * std::pow(q, static_cast<double>(k)) / (1.0 - q);
}

double seq_head_mass(const SequenceSpec& seq, std::size_t k) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) {
    NeumaierSum s;
    const std::size_t stop = std::min(k, ex->values.size());
    for (std::size_t i = 0; i < stop; ++i) s.add(std::norm(ex->values[i]));
    return s.value();
  }
  const auto& g = std::get<GeometricSeq>(seq);
  const double q = std::norm(g.ratio);
  const double qk = std::pow(q, static_cast<double>(k));
  return std::norm(g.first) * (1.0 - qk) / (1.0 - q);
}

std::vector<cplx> seq_values(const SequenceSpec& seq, std::size_t k) {
  std::vector<cplx> out(k, cplx{0.0});
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) {
    const std::size_t stop = std::min(k, ex->values.size());
    for (std::size_t i = 0; i < stop; ++i) out[i] = ex->values[i];
    return out;
  }
  const auto& g = std::get<GeometricSeq>(seq);
  cplx v = g.first;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = v;
    v *= g.ratio;
  }
  return out;
}

std::string seq_digest(const SequenceSpec& seq) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq))
    return "list[" + std::to_string(ex->values.size()) + "]";
  const auto& g = std::get<GeometricSeq>(seq);
  return "geom(|first|=" + fmt("%g", std::abs(g.first)) +
         ", |ratio|=" + fmt("%g", std::abs(g.ratio)) + ")";
}

// --- source structural checks -----------------------------------------------

void check_source(const CoefficientSource& src) {
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    if (d->rows == 0 || d->cols == 0)
      throw StructuralError("dense source: rows and cols must be positive");
    if (d->entries.empty()) throw StructuralError("dense source: no entries");
    if (!(d->declared_tail >= 0.0) || !std::isfinite(d->declared_tail))
      throw StructuralError("dense source: declared_tail must be a nonnegative real");
    for (const auto& [idx, v] : d->entries) {
      if (idx.first >= d->rows || idx.second >= d->cols)
        throw StructuralError("dense source: entry index out of range");
      if (!finite(v)) throw StructuralError("dense source: non-finite amplitude");
    }
  } else if (const auto* o = std::get_if<OuterProduct>(&src)) {
    check_sequence(o->x_seq, false, "outer product x");
    check_sequence(o->y_seq, false, "outer product y");
  } else if (const auto* s = std::get_if<SchmidtDiagonal>(&src)) {
    check_sequence(s->coeffs, true, "schmidt coefficients");
  } else {
    const auto& t = std::get<TwoModeSqueezed>(src);
    if (!(t.lambda >= 0.0 && t.lambda < 1.0))
      throw StructuralError("two-mode squeezed: lambda must lie in [0, 1)");
  }
}

double total_mass(const CoefficientSource& src) {
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    NeumaierSum s;
    for (const auto& [idx, v] : d->entries) s.add(std::norm(v));
    s.add(d->declared_tail);
    return s.value();
  }
  if (const auto* o = std::get_if<OuterProduct>(&src))
    return seq_total_mass(o->x_seq) * seq_total_mass(o->y_seq);
  if (const auto* s = std::get_if<SchmidtDiagonal>(&src))
    return seq_total_mass(s->coeffs);
  return 1.0;  // two-mode squeezed: (1 - l^2) * sum l^(2k) telescopes to 1
}

// Captured squared mass of the n x m window and the declared mass outside it.
struct MassSplit {
  double captured = 0.0;
  double outside = 0.0;  // declared mass beyond the window, analytic where possible
};

MassSplit mass_split(const CoefficientSource& src, std::size_t n, std::size_t m) {
  MassSplit r;
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    NeumaierSum in, out;
    for (const auto& [idx, v] : d->entries)
      (idx.first < n && idx.second < m ? in : out).add(std::norm(v));
    r.captured = in.value();
    r.outside = out.value();
  } else if (const auto* o = std::get_if<OuterProduct>(&src)) {
    const double hx = seq_head_mass(o->x_seq, n), tx = seq_tail_mass(o->x_seq, n);
    const double hy = seq_head_mass(o->y_seq, m), ty = seq_tail_mass(o->y_seq, m);
    r.captured = hx * hy;
    r.outside = hx * ty + tx * hy + tx * ty;
  } else if (const auto* s = std::get_if<SchmidtDiagonal>(&src)) {
    const std::size_t k = std::min(n, m);
    r.captured = seq_head_mass(s->coeffs, k);
    r.outside = seq_tail_mass(s->coeffs, k);
  } else {
    const auto& t = std::get<TwoModeSqueezed>(src);
    const std::size_t k = std::min(n, m);
    const double lk = std::pow(t.lambda, static_cast<double>(k));
    r.outside = lk * lk;
    r.captured = 1.0 - r.outside;
  }
  return r;
}

// Tail bound radicand: declared mass beyond the window plus whatever residual
// the declaration leaves unaccounted for. The residual guard can only grow the
// bound, never shrink it.
double tail_radicand(const CoefficientSource& src, const MassSplit& split) {
  double residual = std::max(0.0, 1.0 - (split.captured + split.outside));
  if (const auto* d = std::get_if<DenseFinite>(&src))
    residual = std::max(residual, d->declared_tail);
  return std::min(1.0, split.outside + residual);
}

}  // namespace

ValidationReport validate_source(const CoefficientSource& src, double tol) {
  if (!(tol > 0.0)) throw StructuralError("validate_source: tol must be positive");
  check_source(src);
  const double mass = total_mass(src);
  return {std::abs(mass - 1.0) <= tol, mass};
}

double analytic_tail_bound(const CoefficientSource& src, std::size_t n, std::size_t m) {
  return std::sqrt(tail_radicand(src, mass_split(src, n, m)));
}

TruncatedState truncate(const CoefficientSource& src, std::size_t n, std::size_t m,
                        std::size_t element_budget) {
  check_source(src);
  if (n == 0 || m == 0) throw StructuralError("truncate: dimensions must be positive");
  if (n > element_budget / m)
    throw ResourceError("truncate: " + std::to_string(n) + "x" + std::to_string(m) +
                        " exceeds the element budget of " + std::to_string(element_budget));

  TruncatedState st;
  st.matrix = CMatrix(n, m);
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    for (const auto& [idx, v] : d->entries)
      if (idx.first < n && idx.second < m) st.matrix(idx.first, idx.second) = v;
  } else if (const auto* o = std::get_if<OuterProduct>(&src)) {
    const auto xs = seq_values(o->x_seq, n);
    const auto ys = seq_values(o->y_seq, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) st.matrix(i, j) = xs[i] * std::conj(ys[j]);
  } else if (const auto* s = std::get_if<SchmidtDiagonal>(&src)) {
    const auto cs = seq_values(s->coeffs, std::min(n, m));
    for (std::size_t i = 0; i < cs.size(); ++i) st.matrix(i, i) = cs[i];
  } else {
    const auto& t = std::get<TwoModeSqueezed>(src);
    const double a0 = std::sqrt(1.0 - t.lambda * t.lambda);
    double v = a0;
    for (std::size_t i = 0; i < std::min(n, m); ++i) {
      st.matrix(i, i) = v;
      v *= t.lambda;
    }
  }

  const MassSplit split = mass_split(src, n, m);
  st.captured_mass = split.captured;
  st.tail_op_bound = std::sqrt(tail_radicand(src, split));
  st.source_digest = describe_source(src);
  return st;
}

std::vector<std::pair<std::size_t, double>> tail_profile(
    const CoefficientSource& src, const std::vector<std::size_t>& sizes) {
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i] >= sizes[i + 1])
      throw StructuralError("tail_profile: sizes must be strictly increasing");
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(sizes.size());
  for (std::size_t s : sizes) {
    const TruncatedState st = truncate(src, s, s);
    out.emplace_back(s, st.tail_op_bound);
  }
  return out;
}

std::string describe_source(const CoefficientSource& src) {
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    std::string out = "dense " + std::to_string(d->rows) + "x" + std::to_string(d->cols) +
                      " (" + std::to_string(d->entries.size()) + " entries";
    if (d->declared_tail > 0.0) out += ", declared_tail=" + fmt("%g", d->declared_tail);
    return out + ")";
  }
  if (const auto* o = std::get_if<OuterProduct>(&src))
    return "outer x=" + seq_digest(o->x_seq) + " y=" + seq_digest(o->y_seq);
  if (const auto* s = std::get_if<SchmidtDiagonal>(&src))
    return "schmidt " + seq_digest(s->coeffs);
  return "tmsv lambda=" + fmt("%.17g", std::get<TwoModeSqueezed>(src).lambda);
}

}  // namespace bps
