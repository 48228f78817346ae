#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtensor/combinatorics.hpp"
#include "qtensor/qualitative.hpp"
#include "qtensor/tensor_ops.hpp"
#include "testutil.hpp"

using namespace qten;

namespace {

SignMatrix sm(const std::vector<std::vector<int>>& rows) {
  SignMatrix s(int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < int(rows.size()); ++i)
    for (int j = 0; j < int(rows[0].size()); ++j) s.set(i + 1, j + 1, rows[i][j]);
  return s;
}

bool valid_matching(const SignTensor& s, const Matching& m, int claimed) {
  if (m.size() != claimed) return false;
  for (const auto& idx : m.entries)
    if (s.at(idx) == 0) return false;
  for (std::size_t a = 0; a < m.entries.size(); ++a)
    for (std::size_t b = a + 1; b < m.entries.size(); ++b)
      for (std::size_t mode = 0; mode < m.entries[a].size(); ++mode)
        if (m.entries[a][mode] == m.entries[b][mode]) return false;
  return true;
}

// no-pruning oracle for small supports
int brute_force_term_rank(const SignTensor& s) {
  std::vector<Index> entries;
  for (const auto& [idx, sign] : s.entries()) {
    (void)sign;
    entries.push_back(idx);
  }
  int best = 0;
  auto rec = [&](auto&& self, std::size_t pos, std::vector<Index>& picked) -> void {
    best = std::max(best, int(picked.size()));
    for (std::size_t i = pos; i < entries.size(); ++i) {
      bool ok = true;
      for (const auto& p : picked)
        for (std::size_t m = 0; m < p.size() && ok; ++m)
          if (p[m] == entries[i][m]) ok = false;
      if (!ok) continue;
      picked.push_back(entries[i]);
      self(self, i + 1, picked);
      picked.pop_back();
    }
  };
  std::vector<Index> picked;
  rec(rec, 0, picked);
  return best;
}

}  // namespace

TEST_CASE("term rank basics") {
  for (int n = 1; n <= 4; ++n)
    for (int k = 2; k <= 4; ++k) {
      TermRankResult r = term_rank(sign_pattern(make_unit(n, k)));
      CHECK(r.value == n);
    }

  CHECK(term_rank(SignTensor{Shape({3, 3})}).value == 0);

  SignTensor ex = sign_pattern(qtest::example41_tensor());
  TermRankResult r = term_rank(ex);
  CHECK(r.value == 2);
  CHECK(r.witness.entries == std::vector<Index>{{1, 1, 1}, {2, 2, 2}});
  CHECK(valid_matching(ex, r.witness, 2));

  SignTensor dense{Shape({2, 2, 2})};
  Index idx(3);
  for (idx[0] = 1; idx[0] <= 2; ++idx[0])
    for (idx[1] = 1; idx[1] <= 2; ++idx[1])
      for (idx[2] = 1; idx[2] <= 2; ++idx[2]) dense.set(idx, 1);
  CHECK(term_rank(dense).value == 2);
  CHECK(brute_force_term_rank(dense) == 2);
}

TEST_CASE("term rank agrees with exhaustive enumeration") {
  Rng rng(11);
  int done = 0;
  while (done < 40) {
    SignTensor s = qtest::random_pattern(qtest::random_dims(4, 4, rng), 0.3, rng);
    if (s.nnz() > 14) continue;
    ++done;
    TermRankResult r = term_rank(s);
    CHECK(r.value == brute_force_term_rank(s));
    CHECK(valid_matching(s, r.witness, r.value));
    TermRankResult ref = term_rank_serial(s);
    CHECK(ref.value == r.value);
    CHECK(valid_matching(s, ref.witness, ref.value));
  }
}

TEST_CASE("term rank invariances") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> dims = qtest::random_dims(4, 4, rng);
    SignTensor s = qtest::random_pattern(dims, 0.4, rng);
    int base = term_rank(s).value;

    CHECK(base <= *std::min_element(dims.begin(), dims.end()));

    SignTensor moved = signed_permute(s, qtest::random_signed_permutation(s.shape(), rng));
    CHECK(term_rank(moved).value == base);

    std::vector<std::vector<int>> subsets;
    for (int n : dims) {
      std::vector<int> keep;
      for (int i = 1; i <= n; ++i)
        if (rng.coin()) keep.push_back(i);
      if (keep.empty()) keep.push_back(1);
      subsets.push_back(keep);
    }
    SignTensor sub = sign_pattern(subtensor(s.unit_member(), subsets));
    CHECK(term_rank(sub).value <= base);
  }
}

TEST_CASE("sign nonsingular matrices") {
  CHECK(is_sns_matrix(sm({{1, 0}, {0, 1}})));
  CHECK(is_sns_matrix(sm({{1, 1}, {-1, 1}})));
  CHECK_FALSE(is_sns_matrix(sm({{1, 1}, {1, 1}})));
  CHECK_FALSE(is_sns_matrix(sm({{1, 0}, {1, 0}})));

  // invariance under row/column permutation and signing
  Rng rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 4);
    SignMatrix s(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) s.set(i, j, rng.uniform_int(-1, 1));
    bool base = is_sns_matrix(s);

    std::vector<int> rp(n), cp(n);
    for (int i = 0; i < n; ++i) rp[i] = cp[i] = i + 1;
    for (int i = n - 1; i > 0; --i) {
      std::swap(rp[i], rp[rng.uniform_int(0, i)]);
      std::swap(cp[i], cp[rng.uniform_int(0, i)]);
    }
    SignMatrix t(n, n);
    for (int i = 1; i <= n; ++i) {
      int ri = rng.coin() ? 1 : -1;
      for (int j = 1; j <= n; ++j) t.set(rp[i - 1], cp[j - 1], ri * s.at(i, j));
    }
    CHECK(is_sns_matrix(t) == base);
  }

  CHECK_THROWS_AS(is_sns_matrix(SignMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(is_sns_matrix(SignMatrix(11, 11)), std::invalid_argument);
}

TEST_CASE("L-matrices") {
  CHECK(is_l_matrix(sm({{0, 1, 0}})));
  CHECK(is_l_matrix(sm({{-1, 1, 1}})));
  CHECK_FALSE(is_l_matrix(sm({{0, 0, 0}})));
  CHECK_FALSE(is_l_matrix(sm({{1, 1}, {1, 1}})));

  // square case coincides with sign nonsingularity
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform_int(1, 4);
    SignMatrix s(n, n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) s.set(i, j, rng.uniform_int(-1, 1));
    CHECK(is_l_matrix(s) == is_sns_matrix(s));
  }

  CHECK_THROWS_AS(is_l_matrix(SignMatrix(13, 2)), std::invalid_argument);
}

TEST_CASE("necessary screen for sign nonsingular tensors") {
  SignTensor with_zero_slice{Shape({2, 2, 2})};
  with_zero_slice.set({1, 1, 1}, 1);
  with_zero_slice.set({1, 2, 2}, -1);  // slice 2 is all zero
  SnsNecessaryReport r1 = sns_tensor_necessary(with_zero_slice);
  CHECK_FALSE(r1.overall);
  CHECK_FALSE(r1.mode_is_l[0]);

  CHECK(sns_tensor_necessary(sign_pattern(qtest::remark_tensor())).overall);
  CHECK(sns_tensor_necessary(sign_pattern(qtest::example41_tensor())).overall);

  CHECK_THROWS_AS(sns_tensor_necessary(SignTensor{Shape({2, 3, 2})}), std::invalid_argument);
}
