// Times the OpenMP kernels against their serial reference on synthetic
// inputs of a few sizes.

#include <chrono>
#include <cstdio>
#include <functional>

#include "qtensor/combinatorics.hpp"
#include "qtensor/determinant.hpp"
#include "qtensor/qualitative.hpp"
#include "qtensor/rank.hpp"
#include "qtensor/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qten;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

SignTensor random_pattern(const std::vector<int>& dims, double density, std::uint64_t seed) {
  SignTensor s{Shape(dims)};
  Rng rng(seed);
  Index idx(dims.size(), 1);
  while (true) {
    if (rng.uniform01() < density) s.set(idx, rng.coin() ? 1 : -1);
    int m = int(dims.size()) - 1;
    while (m >= 0 && ++idx[m] > dims[m]) idx[m--] = 1;
    if (m < 0) break;
  }
  return s;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    SignTensor s = random_pattern({12, 12, 12}, 0.03, 5);
    TermRankResult a, b;
    double ts = time_ms([&] { a = term_rank_serial(s); });
    double tp = time_ms([&] { b = term_rank(s, {true}); });
    row("term-rank 12x12x12 sparse", ts, tp);
    if (a.value != b.value) std::printf("  MISMATCH %d vs %d\n", a.value, b.value);
  }
  {
    SignTensor s = random_pattern({2, 2, 2, 2, 2}, 0.8, 3);
    FalsifyOptions fo;
    fo.trials = 4000;
    fo.seed = 1;
    fo.parallel = false;
    FalsifyReport ra, rb;
    double ts = time_ms([&] { ra = sns_falsify_sample(s, fo); });
    fo.parallel = true;
    double tp = time_ms([&] { rb = sns_falsify_sample(s, fo); });
    row("det falsify 2^5 x4000", ts, tp);
    if (ra.min_abs_det != rb.min_abs_det) std::printf("  MISMATCH min dets\n");
  }
  {
    Rng rng(11);
    DenseTensor a{Shape({4, 4, 4})};
    Index idx(3);
    for (idx[0] = 1; idx[0] <= 4; ++idx[0])
      for (idx[1] = 1; idx[1] <= 4; ++idx[1])
        for (idx[2] = 1; idx[2] <= 4; ++idx[2])
          a.set(idx, make_rational(rng.uniform_int(-9, 9)));
    CpOptions co;
    co.restarts = 24;
    co.parallel = false;
    CpFitResult ra, rb;
    double ts = time_ms([&] { ra = cp_fit(a, 3, co); });
    co.parallel = true;
    double tp = time_ms([&] { rb = cp_fit(a, 3, co); });
    row("cp-fit 4x4x4 r=3", ts, tp);
    if (ra.success() != rb.success()) std::printf("  MISMATCH success flags\n");
  }
  {
    // an unreachable target rank runs every restart to its full budget
    SignTensor s = random_pattern({3, 3, 3}, 0.9, 5);
    MrSearchOptions mo;
    mo.cp.restarts = 24;
    mo.cp.parallel = false;
    CpFitResult ra, rb;
    double ts = time_ms([&] { ra = mr_upper_search(s, 2, mo); });
    mo.cp.parallel = true;
    double tp = time_ms([&] { rb = mr_upper_search(s, 2, mo); });
    row("mr-search 3x3x3 r=2", ts, tp);
    if (ra.success_restart != rb.success_restart) std::printf("  MISMATCH restart index\n");
  }
  {
    SignTensor s = random_pattern({10, 10, 10}, 0.04, 13);
    SignMatrix u = unfold_sign(s, 1);
    bool ra = false, rb = false;
    double ts = time_ms([&] { ra = is_l_matrix(u, false); });
    double tp = time_ms([&] { rb = is_l_matrix(u, true); });
    row("L-matrix 10x100", ts, tp);
    if (ra != rb) std::printf("  MISMATCH decisions\n");
  }
  return 0;
}
