#include "qtensor/combinatorics.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qten {

SignMatrix sign_pattern(const RationalMatrix& m) {
  SignMatrix s(m.rows(), m.cols());
  for (int i = 1; i <= m.rows(); ++i)
    for (int j = 1; j <= m.cols(); ++j) s.set(i, j, sign_of(m.at(i, j)));
  return s;
}

SignMatrix unfold_sign(const SignTensor& s, int mode) {
  int k = s.order();
  if (mode < 1 || mode > k) throw std::invalid_argument("unfold mode out of range");
  long long ncols = 1;
  for (int m = 0; m < k; ++m)
    if (m != mode - 1) ncols *= s.shape().dims[m];
  SignMatrix u(s.shape().dims[mode - 1], int(ncols));
  std::vector<long long> stride(k, 0);
  long long acc = 1;
  for (int m = k - 1; m >= 0; --m) {
    if (m == mode - 1) continue;
    stride[m] = acc;
    acc *= s.shape().dims[m];
  }
  for (const auto& [idx, sign] : s.entries()) {
    long long col = 0;
    for (int m = 0; m < k; ++m)
      if (m != mode - 1) col += (idx[m] - 1) * stride[m];
    u.set(idx[mode - 1], int(col) + 1, sign);
  }
  return u;
}

namespace {

struct MatchingSearch {
  std::vector<Index> entries;  // scarcity-sorted support
  std::vector<int> dims;
  int k = 0;

  bool compatible(const Index& e, const std::vector<std::uint64_t>& used) const {
    for (int m = 0; m < k; ++m)
      if (used[m] >> (e[m] - 1) & 1) return false;
    return true;
  }

  void mark(const Index& e, std::vector<std::uint64_t>& used, bool on) const {
    for (int m = 0; m < k; ++m) {
      std::uint64_t bit = std::uint64_t(1) << (e[m] - 1);
      if (on)
        used[m] |= bit;
      else
        used[m] &= ~bit;
    }
  }

  int upper_bound(const std::vector<std::uint64_t>& used, int remaining) const {
    int ub = remaining;
    for (int m = 0; m < k; ++m)
      ub = std::min(ub, dims[m] - std::popcount(used[m]));
    return ub;
  }

  // records strictly improving matchings only
  void dfs(std::size_t pos, int cur, std::vector<std::uint64_t>& used, std::vector<std::size_t>& stack,
           int& best, std::vector<std::size_t>& best_stack) const {
    if (cur > best) {
      best = cur;
      best_stack = stack;
    }
    if (pos >= entries.size()) return;
    if (cur + upper_bound(used, int(entries.size() - pos)) <= best) return;
    const Index& e = entries[pos];
    if (compatible(e, used)) {
      mark(e, used, true);
      stack.push_back(pos);
      dfs(pos + 1, cur + 1, used, stack, best, best_stack);
      stack.pop_back();
      mark(e, used, false);
    }
    dfs(pos + 1, cur, used, stack, best, best_stack);
  }
};

MatchingSearch build_search(const SignTensor& s) {
  MatchingSearch p;
  p.dims = s.shape().dims;
  p.k = s.order();
  for (int n : p.dims)
    if (n > 64) throw std::invalid_argument("dimension too large for term rank search");
  p.entries.reserve(s.nnz());
  for (const auto& [idx, sign] : s.entries()) p.entries.push_back(idx);
  // scarcity: smallest per-mode frequency of the entry's index values
  std::vector<std::vector<int>> freq(p.k);
  for (int m = 0; m < p.k; ++m) freq[m].assign(p.dims[m] + 1, 0);
  for (const auto& e : p.entries)
    for (int m = 0; m < p.k; ++m) ++freq[m][e[m]];
  auto scarcity = [&](const Index& e) {
    int v = int(p.entries.size());
    for (int m = 0; m < p.k; ++m) v = std::min(v, freq[m][e[m]]);
    return v;
  };
  std::stable_sort(p.entries.begin(), p.entries.end(),
                   [&](const Index& a, const Index& b) { return scarcity(a) < scarcity(b); });
  return p;
}

std::pair<int, std::vector<std::size_t>> greedy_matching(const MatchingSearch& p) {
  std::vector<std::uint64_t> used(p.k, 0);
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < p.entries.size(); ++i)
    if (p.compatible(p.entries[i], used)) {
      p.mark(p.entries[i], used, true);
      picked.push_back(i);
    }
  return {int(picked.size()), picked};
}

TermRankResult result_from(const MatchingSearch& p, int value, const std::vector<std::size_t>& stack) {
  TermRankResult r;
  r.value = value;
  for (std::size_t i : stack) r.witness.entries.push_back(p.entries[i]);
  std::sort(r.witness.entries.begin(), r.witness.entries.end());
  return r;
}

}  // namespace

TermRankResult term_rank_serial(const SignTensor& s) {
  MatchingSearch p = build_search(s);
  auto [best, best_stack] = greedy_matching(p);
  if (best < p.upper_bound(std::vector<std::uint64_t>(p.k, 0), int(p.entries.size()))) {
    std::vector<std::uint64_t> used(p.k, 0);
    std::vector<std::size_t> stack;
    p.dfs(0, 0, used, stack, best, best_stack);
  }
  return result_from(p, best, best_stack);
}

namespace {

// value-only DFS against a shared incumbent; the reachable maximum is the
// same under any interleaving, so the result stays deterministic
void dfs_value(const MatchingSearch& p, std::size_t pos, int cur, std::vector<std::uint64_t>& used,
               std::atomic<int>& best) {
  int b = best.load(std::memory_order_relaxed);
  while (cur > b && !best.compare_exchange_weak(b, cur)) {
  }
  if (pos >= p.entries.size()) return;
  if (cur + p.upper_bound(used, int(p.entries.size() - pos)) <= best.load(std::memory_order_relaxed))
    return;
  const Index& e = p.entries[pos];
  if (p.compatible(e, used)) {
    p.mark(e, used, true);
    dfs_value(p, pos + 1, cur + 1, used, best);
    p.mark(e, used, false);
  }
  dfs_value(p, pos + 1, cur, used, best);
}

// can the partial matching be completed to exactly `target` more entries?
bool completable(const MatchingSearch& p, std::size_t pos, int missing,
                 std::vector<std::uint64_t>& used) {
  if (missing == 0) return true;
  if (pos >= p.entries.size()) return false;
  if (p.upper_bound(used, int(p.entries.size() - pos)) < missing) return false;
  const Index& e = p.entries[pos];
  if (p.compatible(e, used)) {
    p.mark(e, used, true);
    bool ok = completable(p, pos + 1, missing - 1, used);
    p.mark(e, used, false);
    if (ok) return true;
  }
  return completable(p, pos + 1, missing, used);
}

}  // namespace

TermRankResult term_rank(const SignTensor& s, const TermRankOptions& opts) {
  MatchingSearch p = build_search(s);
  auto [greedy, greedy_stack] = greedy_matching(p);
  (void)greedy_stack;
  int value = greedy;
  int root_ub = p.upper_bound(std::vector<std::uint64_t>(p.k, 0), int(p.entries.size()));

  if (greedy < root_ub && !p.entries.empty()) {
    std::atomic<int> best{greedy};
    int nb = int(p.entries.size());
    auto run_branch = [&](int b) {
      std::vector<std::uint64_t> used(p.k, 0);
      p.mark(p.entries[b], used, true);
      dfs_value(p, std::size_t(b) + 1, 1, used, best);
    };
#ifdef _OPENMP
    if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int b = 0; b < nb; ++b) run_branch(b);
    } else {
      for (int b = 0; b < nb; ++b) run_branch(b);
    }
#else
    (void)opts;
    for (int b = 0; b < nb; ++b) run_branch(b);
#endif
    value = best.load();
  }

  // canonical witness: the lexicographically first matching of that size,
  // grown greedily over the support with completability checks
  MatchingSearch lex = p;
  lex.entries.clear();
  for (const auto& [idx, sign] : s.entries()) {
    (void)sign;
    lex.entries.push_back(idx);
  }
  TermRankResult result;
  result.value = value;
  std::vector<std::uint64_t> used(p.k, 0);
  int have = 0;
  for (std::size_t i = 0; i < lex.entries.size() && have < value; ++i) {
    const Index& e = lex.entries[i];
    if (!lex.compatible(e, used)) continue;
    lex.mark(e, used, true);
    if (completable(lex, i + 1, value - have - 1, used)) {
      result.witness.entries.push_back(e);
      ++have;
    } else {
      lex.mark(e, used, false);
    }
  }
  return result;
}

bool is_sns_matrix(const SignMatrix& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("SNS test requires a square pattern");
  int n = s.rows();
  if (n > 10) throw std::invalid_argument("SNS term enumeration limited to n <= 10");
  bool pos = false, neg = false;
  auto rec = [&](auto&& self, int row, unsigned used, int sign) -> bool {
    if (row == n) {
      (sign > 0 ? pos : neg) = true;
      return pos && neg;
    }
    for (int c = 0; c < n; ++c) {
      if (used >> c & 1) continue;
      int sv = s.at(row + 1, c + 1);
      if (sv == 0) continue;
      int inv = std::popcount(used >> (c + 1));
      if (self(self, row + 1, used | (1u << c), sign * sv * (inv & 1 ? -1 : 1))) return true;
    }
    return false;
  };
  rec(rec, 0, 0u, 1);
  return pos != neg;
}

namespace {

// column sign vectors, deduplicated and ordered sparse-first: a column
// with few nonzeros knocks out many signings early
std::vector<std::vector<std::pair<int, int>>> distinct_columns(const SignMatrix& s) {
  std::vector<std::vector<std::pair<int, int>>> cols;
  for (int j = 1; j <= s.cols(); ++j) {
    std::vector<std::pair<int, int>> c;
    for (int i = 1; i <= s.rows(); ++i)
      if (int v = s.at(i, j); v != 0) c.emplace_back(i, v);
    if (!c.empty()) cols.push_back(std::move(c));
  }
  std::sort(cols.begin(), cols.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

// u encoded base 3, digit 0 -> 0, 1 -> +1, 2 -> -1
bool signing_blocked(const std::vector<std::vector<std::pair<int, int>>>& cols,
                     const std::vector<int>& u) {
  for (const auto& col : cols) {
    bool has_pos = false, has_neg = false;
    for (const auto& [row, sv] : col) {
      int v = u[row - 1] * sv;
      if (v > 0) has_pos = true;
      if (v < 0) has_neg = true;
    }
    if (has_pos != has_neg) return true;  // nonempty and unisigned
  }
  return false;
}

bool decode_signing(long long t, int m, std::vector<int>& u) {
  // returns false for signings whose first nonzero is -1 (duplicates of -u)
  int first = 0;
  for (int i = 0; i < m; ++i) {
    int d = int(t % 3);
    t /= 3;
    u[i] = d == 2 ? -1 : d;
    if (first == 0) first = u[i];
  }
  return first >= 0;
}

}  // namespace

bool is_l_matrix(const SignMatrix& s, bool parallel) {
  int m = s.rows();
  if (m < 1) throw std::invalid_argument("L-matrix test requires at least one row");
  if (m > 12) throw std::invalid_argument("L-matrix signing enumeration limited to m <= 12");
  auto cols = distinct_columns(s);
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= 3;

  bool found = false;  // an unblocked signing refutes full row rank
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel
    {
      std::vector<int> u(m);
#pragma omp for schedule(static)
      for (long long t = 1; t < total; ++t) {
        bool skip;
#pragma omp atomic read
        skip = found;
        if (skip) continue;
        if (!decode_signing(t, m, u)) continue;
        if (!signing_blocked(cols, u)) {
#pragma omp atomic write
          found = true;
        }
      }
    }
    return !found;
  }
#else
  (void)parallel;
#endif
  std::vector<int> u(m);
  for (long long t = 1; t < total; ++t) {
    if (!decode_signing(t, m, u)) continue;
    if (!signing_blocked(cols, u)) return false;
  }
  return true;
}

SnsNecessaryReport sns_tensor_necessary(const SignTensor& s, bool parallel) {
  if (!s.shape().is_cubical()) throw std::invalid_argument("SNS necessary test requires a cubical tensor");
  if (s.shape().dims[0] > 12)
    throw std::invalid_argument("SNS necessary test limited to dimension <= 12");
  SnsNecessaryReport report;
  report.overall = true;
  for (int mode = 1; mode <= s.order(); ++mode) {
    bool ok = is_l_matrix(unfold_sign(s, mode), parallel);
    report.mode_is_l.push_back(ok);
    report.overall = report.overall && ok;
  }
  return report;
}

}  // namespace qten
