// Acceptance gate: each numbered criterion prints one PASS/FAIL line and the
// binary exits nonzero if any of them fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bps/certify.hpp"
#include "bps/cli.hpp"
#include "bps/minor_test.hpp"
#include "bps/report.hpp"
#include "bps/spectral.hpp"
#include "bps/state.hpp"
#include "bps/state_file.hpp"
#include "support.hpp"

using namespace bps;
using namespace bps::testing;

namespace {

int g_criterion_failures = 0;
std::vector<std::string> g_notes;

void require(bool ok, const std::string& what) {
  if (!ok) {
    ++g_criterion_failures;
    g_notes.push_back(what);
  }
}

std::string fixture(const std::string& name) {
  return std::string(BPS_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// -- criterion 1 -------------------------------------------------------------
// Rank-1 detection equivalence: the minor test, the spectral gap and the
// constructive factorization agree on every sample.
void criterion_equivalence() {
  auto rng = make_rng(1001);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 500; ++rep) {
      const bool rank1 = rep % 2 == 0;
      CMatrix m = rank1 ? random_rank1(rng, n, n) : random_state_matrix(rng, n, n);
      if (!rank1) {
        while (kernels::jacobi_svd(m).sigma[1] < 1e-4) m = random_state_matrix(rng, n, n);
      }
      const bool vanish = minors_vanish(m, 1e-9);
      const bool sigma_flat = kernels::jacobi_svd(m).sigma[1] <= 1e-8;
      const bool factored =
          proportionality_factor(m, 1e-9).status == FactorStatus::Factored;
      if (vanish != rank1 || sigma_flat != rank1 || factored != rank1) {
        require(false, "disagreement at n=" + std::to_string(n) + " rep=" +
                           std::to_string(rep));
        return;
      }
    }
  }
}

// -- criterion 2 -------------------------------------------------------------
// Tail-bound soundness: exact residual operator norms and singular value
// shifts stay below sqrt(|s - s_n|).
void criterion_tail_soundness() {
  auto rng = make_rng(1002);
  std::uniform_int_distribution<std::size_t> dim(2, 16);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    const CMatrix full = random_state_matrix(rng, rows, cols);
    NeumaierSum total;
    for (std::size_t i = 0; i < full.size(); ++i) total.add(std::norm(full.data()[i]));
    const double s = total.value();
    const auto sigma_full = kernels::jacobi_svd(full).sigma;

    for (std::size_t n = 1; n <= std::min(rows, cols); ++n) {
      CMatrix residual = full;
      CMatrix block(n, n);
      NeumaierSum captured;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          block(i, j) = full(i, j);
          captured.add(std::norm(full(i, j)));
          residual(i, j) = 0.0;
        }
      const double bound = std::sqrt(std::abs(s - captured.value())) + 1e-12;

      const double exact_norm = kernels::jacobi_svd(residual).sigma[0];
      if (exact_norm > bound) {
        require(false, "operator norm " + std::to_string(exact_norm) + " above bound");
        return;
      }
      const auto sigma_n = kernels::jacobi_svd(block).sigma;
      for (std::size_t k = 0; k < sigma_full.size(); ++k) {
        const double sk = k < sigma_n.size() ? sigma_n[k] : 0.0;
        if (std::abs(sigma_full[k] - sk) > bound) {
          require(false, "Weyl violation at k=" + std::to_string(k));
          return;
        }
      }
    }
  }
}

// -- criterion 3 -------------------------------------------------------------
// Factorization round trip on matrices built from random unit pairs.
void criterion_factor_roundtrip() {
  auto rng = make_rng(1003);
  std::uniform_int_distribution<std::size_t> dim(1, 32);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = random_unit_vector(rng, dim(rng));
    const auto y = random_unit_vector(rng, dim(rng));
    const CMatrix m = outer_product(x, y);
    const auto p = proportionality_factor(m, 1e-9);
    if (p.status != FactorStatus::Factored) {
      require(false, "factorization failed at rep " + std::to_string(rep));
      return;
    }
    const auto& f = *p.factor;
    NeumaierSum rsq;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        rsq.add(std::norm(m(i, j) - f.scale * f.x[i] * std::conj(f.y[j])));
    require(std::sqrt(rsq.value()) <= 1e-10, "reconstruction residual too large");
    require(std::abs(vec_norm(f.x) - 1.0) <= 1e-12, "x not unit");
    require(std::abs(vec_norm(f.y) - 1.0) <= 1e-12, "y not unit");
    if (g_criterion_failures) return;
  }
}

// -- criterion 4 -------------------------------------------------------------
// Polar decomposition contract, including rank-deficient inputs.
void criterion_polar() {
  auto rng = make_rng(1004);
  std::uniform_int_distribution<std::size_t> dim(2, 12);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = dim(rng), m = dim(rng);
    CMatrix a;
    switch (rep % 3) {
      case 0: a = random_state_matrix(rng, n, m); break;
      case 1: a = random_rank_r(rng, n, m, 1 + rng() % std::min(n, m)); break;
      default: a = random_rank1(rng, n, m); break;
    }
    const auto p = polar_decompose(a);
    require(frobenius_distance(kernels::matmul(p.u, p.a), a) <= 1e-9, "UA != M");

    for (int probe = 0; probe < 20; ++probe) {
      std::vector<cplx> h(m);
      for (auto& z : h) z = cplx{gauss(rng), gauss(rng)};
      if (std::abs(vec_norm(mat_vec(p.a, h)) - vec_norm(mat_vec(a, h))) > 1e-9) {
        require(false, "||Ah|| != ||Mh||");
        return;
      }
    }

    const auto sv = kernels::jacobi_svd(a);
    const double rank_tol = kPolarRankTol * sv.sigma[0];
    for (std::size_t k = 0; k < sv.sigma.size(); ++k) {
      std::vector<cplx> vk(m);
      for (std::size_t i = 0; i < m; ++i) vk[i] = sv.v(i, k);
      const double img = vec_norm(mat_vec(p.u, vk));
      if (sv.sigma[k] > rank_tol ? std::abs(img - 1.0) > 1e-9 : img > 1e-9) {
        require(false, "partial isometry defect at k=" + std::to_string(k));
        return;
      }
    }
    if (g_criterion_failures) return;
  }
}

// -- criterion 5 -------------------------------------------------------------
// Two-mode squeezed ground truth at lambda = 0.5, n = 30.
void criterion_tmsv_ground_truth() {
  const TruncatedState st = truncate(TwoModeSqueezed{0.5}, 30, 30);
  const SpectralSummary s = svd(st);
  for (std::size_t k = 0; k < 30; ++k) {
    const double expect = std::sqrt(0.75) * std::pow(0.5, double(k));
    if (std::abs(s.singular_values[k] - expect) > 1e-12) {
      require(false, "sigma_k off at k=" + std::to_string(k));
      return;
    }
  }

  const Verdict v = classify(st, 1e-6, 1e-9);
  require(v.kind == VerdictKind::CertifiedEntangled, "verdict not certified-entangled");
  require(v.sigma2_lower >= 0.43301 && v.sigma2_lower <= 0.43302,
          "sigma_2 lower bound outside [0.43301, 0.43302]");

  // independent oracle: direct series summation of -sum p_k log2 p_k
  double series = 0.0;
  for (double p = 0.75; p > 1e-40; p *= 0.25) series -= p * std::log2(p);
  const double closed = -std::log2(0.75) - (1.0 / 3.0) * std::log2(0.25);
  require(std::abs(series - closed) <= 1e-12, "entropy oracle disagrees with closed form");

  const auto ent = entanglement_entropy(st);
  require(std::abs(ent.entropy_bits - closed) <= 1e-9, "entropy_bits off the closed form");
}

// -- criterion 6 -------------------------------------------------------------
// Bell fixture end to end, through the CLI.
void criterion_bell() {
  const auto src = parse_state_file(slurp(fixture("bell_exact.bps")));
  require(validate_source(src).passed, "bell fixture fails validation");
  const TruncatedState st = truncate(src, 2, 2);

  const auto scan = max_minor_magnitude(st);
  require(scan.value == 0.5, "max minor is not exactly 0.5");

  const SpectralSummary s = svd(st);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  require(std::abs(s.singular_values[0] - inv_sqrt2) <= 1e-15, "sigma_1 != 1/sqrt(2)");
  require(std::abs(s.singular_values[1] - inv_sqrt2) <= 1e-15, "sigma_2 != 1/sqrt(2)");
  require(std::abs(s.truncated_entropy - 1.0) <= 1e-12, "entropy != 1 bit");

  const Verdict v = classify(st, 1e-6, 1e-9);
  require(v.kind == VerdictKind::CertifiedEntangled, "bell verdict not entangled");

  std::ostringstream out, err;
  const int code = run_cli({"analyze", fixture("bell_exact.bps")}, out, err);
  require(code == 0, "cli exit code " + std::to_string(code) + " != 0");
}

// -- criterion 7 -------------------------------------------------------------
// Rank-1 range property: images stay in the span of the top left vector.
void criterion_rank1_range() {
  auto rng = make_rng(1007);
  std::uniform_int_distribution<std::size_t> dim(2, 16);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = dim(rng), m = dim(rng);
    const CMatrix a = random_rank1(rng, n, m);
    const auto sv = kernels::jacobi_svd(a);
    for (int probe = 0; probe < 100; ++probe) {
      std::vector<cplx> z(m);
      for (auto& v : z) v = cplx{gauss(rng), gauss(rng)};
      const auto az = mat_vec(a, z);
      cplx along = 0.0;
      for (std::size_t i = 0; i < n; ++i) along += std::conj(sv.u(i, 0)) * az[i];
      NeumaierSum off;
      for (std::size_t i = 0; i < n; ++i) off.add(std::norm(az[i] - along * sv.u(i, 0)));
      if (std::sqrt(off.value()) > 1e-10) {
        require(false, "image leaves the top singular direction");
        return;
      }
    }
  }
}

// -- criterion 8 -------------------------------------------------------------
// Format stability: parse/emit identity and byte-identical reports.
void criterion_format_roundtrip() {
  const char* names[] = {"bell.bps",         "bell_exact.bps", "product.bps",
                         "tmsv05.bps",       "tmsv09.bps",     "schmidt_geom.bps",
                         "schmidt_list.bps", "outer_geom.bps", "outer_list.bps",
                         "bad_mass.bps",     "dense_tail.bps"};
  for (const char* name : names) {
    const auto src = parse_state_file(slurp(fixture(name)));
    const std::string emitted = emit_state_file(src);
    const auto reparsed = parse_state_file(emitted);
    require(reparsed == src, std::string("parse/emit identity broken for ") + name);
    require(emit_state_file(reparsed) == emitted,
            std::string("emission not canonical for ") + name);
  }

  for (const char* name : {"bell.bps", "tmsv05.bps", "outer_geom.bps"}) {
    std::ostringstream out1, out2, err;
    const int c1 = run_cli({"analyze", fixture(name), "--format", "json"}, out1, err);
    const int c2 = run_cli({"analyze", fixture(name), "--format", "json"}, out2, err);
    require(c1 == c2, std::string("exit codes differ for ") + name);
    require(out1.str() == out2.str() && !out1.str().empty(),
            std::string("json not byte-identical for ") + name);
  }
}

struct Criterion {
  int number;
  const char* label;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "rank-1 equivalence of minor, spectral and factor routes", criterion_equivalence},
      {2, "tail-bound soundness and Weyl stability on finite truth", criterion_tail_soundness},
      {3, "canonical factor round trip on random unit pairs", criterion_factor_roundtrip},
      {4, "polar decomposition contract incl. rank-deficient input", criterion_polar},
      {5, "two-mode squeezed ground truth (lambda = 0.5, n = 30)", criterion_tmsv_ground_truth},
      {6, "Bell fixture end-to-end through the CLI", criterion_bell},
      {7, "rank-1 range property under random probes", criterion_rank1_range},
      {8, "state-file round trip and deterministic reports", criterion_format_roundtrip},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    g_criterion_failures = 0;
    g_notes.clear();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const std::exception& e) {
      require(false, std::string("exception: ") + e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool ok = g_criterion_failures == 0;
    std::printf("[%s] criterion %d: %s (%.0f ms)\n", ok ? "PASS" : "FAIL", c.number,
                c.label, ms);
    for (const auto& note : g_notes) std::printf("       %s\n", note.c_str());
    if (!ok) ++failed;
  }
  if (failed) {
    std::printf("%d of %zu acceptance criteria failed\n", failed, criteria.size());
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", criteria.size());
  return 0;
}
