// Timing harness comparing the serial reference kernels against the OpenMP
// ones on random dense problems. Usage: bps_bench [--size N] [--reps R]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "bps/complex_matrix.hpp"
#include "bps/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using bps::CMatrix;
using bps::cplx;
using bps::kernels::ExecPolicy;

CMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::normal_distribution<double> dist;
  CMatrix a(n, m);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = cplx{dist(rng), dist(rng)};
  const double f = bps::frobenius_norm(a);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] /= f;
  return a;
}

template <typename F>
double time_best_ms(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, std::size_t n, double serial_ms, double parallel_ms,
            double diff) {
  std::printf("%-12s %6zu  serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  |diff| %.3g\n",
              name, n, serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t size = 192;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--size") && i + 1 < argc) size = std::stoul(argv[++i]);
    if (!std::strcmp(argv[i], "--reps") && i + 1 < argc) reps = std::stoi(argv[++i]);
  }

#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled (serial build)\n");
#endif

  std::mt19937_64 rng(20260809);
  const CMatrix a = random_matrix(rng, size, size);
  const CMatrix b = random_matrix(rng, size, size);

  {
    CMatrix cs, cp;
    const double ts = time_best_ms(reps, [&] { cs = bps::kernels::matmul(a, b, ExecPolicy::Serial); });
    const double tp = time_best_ms(reps, [&] { cp = bps::kernels::matmul(a, b, ExecPolicy::Parallel); });
    report("matmul", size, ts, tp, max_abs_diff(cs, cp));
  }
  {
    CMatrix gs, gp;
    const double ts = time_best_ms(reps, [&] { gs = bps::kernels::gram(a, ExecPolicy::Serial); });
    const double tp = time_best_ms(reps, [&] { gp = bps::kernels::gram(a, ExecPolicy::Parallel); });
    report("gram", size, ts, tp, max_abs_diff(gs, gp));
  }
  {
    // The exhaustive minor scan is quartic; use a smaller edge.
    const std::size_t ms = std::min<std::size_t>(size, 96);
    const CMatrix small = random_matrix(rng, ms, ms);
    bps::kernels::MinorScanResult rs, rp;
    const double ts = time_best_ms(reps, [&] { rs = bps::kernels::minor_scan(small, ExecPolicy::Serial); });
    const double tp = time_best_ms(reps, [&] { rp = bps::kernels::minor_scan(small, ExecPolicy::Parallel); });
    report("minor_scan", ms, ts, tp, std::abs(rs.value - rp.value));
  }
  {
    bps::kernels::SvdResult ss, sp;
    const double ts = time_best_ms(reps, [&] { ss = bps::kernels::jacobi_svd(a, ExecPolicy::Serial); });
    const double tp = time_best_ms(reps, [&] { sp = bps::kernels::jacobi_svd(a, ExecPolicy::Parallel); });
    double d = 0.0;
    for (std::size_t k = 0; k < ss.sigma.size(); ++k)
      d = std::max(d, std::abs(ss.sigma[k] - sp.sigma[k]));
    report("jacobi_svd", size, ts, tp, d);
  }
  return 0;
}
