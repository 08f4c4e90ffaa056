#include "bps/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bps/errors.hpp"
#include "bps/summation.hpp"

namespace bps {

namespace {

constexpr double kCrossCheckSlack = 1e-8;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double sigma_at(const SpectralSummary& s, std::size_t k) {
  return k < s.singular_values.size() ? s.singular_values[k] : 0.0;
}

// Both tests see the same truncation, so they must tell the same story:
// every minor is bounded by sigma1*sigma2, and (exhaustively scanned) the
// largest minor cannot be smaller than sigma1*sigma2 / sqrt(#pairs).
void cross_check(const CMatrix& m, double s1, double s2, double max_minor) {
  if (max_minor > s1 * s2 + kCrossCheckSlack)
    throw ConsistencyError("minor test exceeds the spectral bound: max minor " +
                           fmt(max_minor) + " vs sigma1*sigma2 " + fmt(s1 * s2));
  const bool exhaustive = m.rows() <= kMinorExhaustiveCap && m.cols() <= kMinorExhaustiveCap;
  if (exhaustive && m.rows() >= 2 && m.cols() >= 2) {
    const double pairs = 0.25 * static_cast<double>(m.rows()) * (m.rows() - 1) *
                         static_cast<double>(m.cols()) * (m.cols() - 1);
    if (s1 * s2 > max_minor * std::sqrt(pairs) + kCrossCheckSlack)
      throw ConsistencyError("spectral gap invisible to the minor test: sigma1*sigma2 " +
                             fmt(s1 * s2) + " vs max minor " + fmt(max_minor));
  }
}

RankOneFactor top_singular_factor(const CMatrix& m, const SpectralSummary& s) {
  RankOneFactor f;
  const std::size_t n = m.rows(), cols = m.cols();
  f.x.resize(n);
  f.y.resize(cols);
  for (std::size_t i = 0; i < n; ++i) f.x[i] = s.left_vectors(i, 0);
  for (std::size_t j = 0; j < cols; ++j) f.y[j] = s.right_vectors(j, 0);
  f.scale = s.singular_values.empty() ? 0.0 : s.singular_values[0];
  NeumaierSum rsq;
  for (std::size_t k = 1; k < s.singular_values.size(); ++k)
    rsq.add(s.singular_values[k] * s.singular_values[k]);
  f.residual = std::sqrt(rsq.value());
  return f;
}

}  // namespace

Interval sigma2_interval(const TruncatedState& st) {
  const SpectralSummary s = svd(st);
  const double s2 = sigma_at(s, 1);
  return {std::max(0.0, s2 - st.tail_op_bound), s2 + st.tail_op_bound};
}

Analysis analyze(const TruncatedState& st, double delta, double tol) {
  if (delta < 0.0) throw StructuralError("classify: delta must be >= 0");
  if (!(tol > 0.0)) throw StructuralError("classify: tol must be positive");

  Analysis a;
  a.summary = svd(st);
  const double s1 = sigma_at(a.summary, 0);
  const double s2 = sigma_at(a.summary, 1);
  const auto scan = max_minor_magnitude(st);
  cross_check(st.matrix, s1, s2, scan.value);

  const double tail = st.tail_op_bound;
  const Interval iv{std::max(0.0, s2 - tail), s2 + tail};

  Verdict& v = a.verdict;
  v.evidence = {iv, scan.value, tail, st.matrix.rows(), st.matrix.cols(), st.captured_mass};

  if (iv.lo > tol) {
    v.kind = VerdictKind::CertifiedEntangled;
    v.sigma2_lower = iv.lo;
  } else if (iv.hi <= delta) {
    v.kind = VerdictKind::SeparableWithin;
    v.delta = delta;
    Proportionality p = proportionality_factor(st, tol);
    v.factor = p.status == FactorStatus::Factored
                   ? std::move(*p.factor)
                   : top_singular_factor(st.matrix, a.summary);
  } else {
    v.kind = VerdictKind::Inconclusive;
    if (s2 > tol) {
      v.reason = "tail bound " + fmt(tail) + " swallows sigma_2 = " + fmt(s2) +
                 "; enlarge the truncation";
    } else {
      v.reason = "sigma_2 = " + fmt(s2) + " sits in the tolerance band and the tail bound " +
                 fmt(tail) + " exceeds delta = " + fmt(delta);
    }
  }

  a.entropy = {a.summary.truncated_entropy, 1.0 - st.captured_mass};
  return a;
}

Verdict classify(const TruncatedState& st, double delta, double tol) {
  return analyze(st, delta, tol).verdict;
}

EntropyResult entanglement_entropy(const TruncatedState& st) {
  const SpectralSummary s = svd(st);
  return {s.truncated_entropy, 1.0 - st.captured_mass};
}

}  // namespace bps
