#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qtensor/qualitative.hpp"
#include "qtensor/tensor_ops.hpp"
#include "testutil.hpp"

using namespace qten;

namespace {

SignTensor sign_matrix(const std::vector<std::vector<int>>& rows) {
  SignTensor s{Shape({int(rows.size()), int(rows[0].size())})};
  for (int i = 0; i < int(rows.size()); ++i)
    for (int j = 0; j < int(rows[0].size()); ++j)
      if (rows[i][j] != 0) s.set({i + 1, j + 1}, rows[i][j]);
  return s;
}

}  // namespace

TEST_CASE("sign pattern") {
  DenseTensor a{Shape({2, 2})};
  a.set({1, 1}, 2);
  a.set({2, 1}, -3);
  a.set({2, 2}, 1);
  CHECK(sign_pattern(a) == sign_matrix({{1, 0}, {-1, 1}}));

  CHECK(sign_pattern(DenseTensor{Shape({2, 3})}).is_zero());

  SignTensor r = sign_pattern(qtest::remark_tensor());
  CHECK(r.nnz() == 3);
  CHECK(r.at({1, 1, 1}) == 1);
  CHECK(r.at({1, 2, 2}) == 1);
  CHECK(r.at({2, 1, 2}) == 1);
}

TEST_CASE("sample member") {
  SignTensor zero{Shape({2, 2, 2})};
  CHECK(sample_member(zero, 3).is_zero());

  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    SignTensor s = qtest::random_pattern(qtest::random_dims(4, 3, rng), 0.6, rng);
    DenseTensor member = sample_member(s, trial);
    CHECK(sign_pattern(member) == s);
    for (const auto& [idx, v] : member.entries()) {
      (void)idx;
      Rational m = abs(v);
      CHECK(m >= make_rational(1, 10));
      CHECK(m <= 10);
    }
  }

  // distinct seeds give distinct members (over ten seeds)
  SignTensor s = sign_matrix({{1, 1}, {-1, 1}});
  std::set<std::string> seen;
  for (int seed = 0; seed < 10; ++seed) {
    DenseTensor m = sample_member(s, seed);
    std::string key;
    for (const auto& [idx, v] : m.entries()) key += to_string(v) + ";";
    seen.insert(key);
  }
  CHECK(seen.size() == 10);

  CHECK_THROWS_AS(sample_member(s, 0, SampleOptions{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("signed permute") {
  SignTensor s = sign_pattern(qtest::example41_tensor());
  CHECK(signed_permute(s, SignedPermutation::identity(s.shape())) == s);

  // odd order, every signing -1: the global sign flips
  SignedPermutation flip = SignedPermutation::identity(s.shape());
  for (auto& d : flip.signs)
    for (int& x : d) x = -1;
  SignTensor flipped = signed_permute(s, flip);
  for (const auto& [idx, sign] : s.entries()) CHECK(flipped.at(idx) == -sign);

  SignTensor diag = sign_matrix({{1, 0}, {0, -1}});
  SignedPermutation swap1 = SignedPermutation::identity(diag.shape());
  swap1.perms[0] = {2, 1};
  CHECK(signed_permute(diag, swap1) == sign_matrix({{0, -1}, {1, 0}}));

  SignedPermutation bad = SignedPermutation::identity(s.shape());
  bad.perms[0] = {1, 1};
  CHECK_THROWS_AS(signed_permute(s, bad), std::invalid_argument);
}

TEST_CASE("condense") {
  SignTensor all_plus = sign_matrix({{1, 1}, {1, 1}});
  SignTensor c1 = condense(all_plus);
  CHECK(c1.shape().dims == std::vector<int>{1, 1});
  CHECK(c1.at({1, 1}) == 1);

  SignTensor alt = sign_matrix({{1, -1}, {-1, 1}});
  SignTensor c2 = condense(alt);
  CHECK(c2.shape().dims == std::vector<int>{1, 1});
  CHECK(c2.at({1, 1}) == 1);

  SignTensor ex = sign_pattern(qtest::example41_tensor());
  CHECK(condense(ex).shape() == ex.shape());

  SignTensor zero{Shape({2, 3, 2})};
  SignTensor cz = condense(zero);
  CHECK(cz.shape().dims == std::vector<int>{1, 1, 1});
  CHECK(cz.is_zero());

  // order-1 pattern: any nonzero sign vector condenses to one entry
  SignTensor vec{Shape({4})};
  vec.set({1}, 1);
  vec.set({3}, -1);
  SignTensor cv = condense(vec);
  CHECK(cv.shape().dims == std::vector<int>{1});
  CHECK(cv.nnz() == 1);
  CHECK(is_mr1(vec));

  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    SignTensor s = qtest::random_pattern(qtest::random_dims(4, 3, rng), 0.5, rng);
    SignTensor once = condense(s);
    CHECK(condense(once) == once);
  }
}

TEST_CASE("minimum rank one decision") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> dims = qtest::random_dims(4, 4, rng);
    std::vector<std::vector<int>> vecs;
    for (int n : dims) vecs.push_back(qtest::random_sign_vector(n, rng));
    CHECK(is_mr1(qtest::sign_outer_product(vecs)));
  }

  CHECK_FALSE(is_mr1(SignTensor{Shape({2, 2})}));
  CHECK_FALSE(is_mr1(sign_pattern(qtest::example41_tensor())));
}

TEST_CASE("decision invariance under the equivalence moves") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> dims = qtest::random_dims(4, 3, rng);
    SignTensor s = qtest::random_pattern(dims, 0.55, rng);
    if (trial % 3 == 0) {  // mix in rank-one patterns so both outcomes occur
      std::vector<std::vector<int>> vecs;
      for (int n : dims) vecs.push_back(qtest::random_sign_vector(n, rng));
      s = qtest::sign_outer_product(vecs);
    }
    int p = rng.uniform_int(1, s.order());
    int q = rng.uniform_int(1, s.order());
    SignTensor moved = qten::transpose_pq(s, p, q);
    moved = signed_permute(moved, qtest::random_signed_permutation(moved.shape(), rng));
    CHECK(is_mr1(moved) == is_mr1(s));
  }
}

TEST_CASE("subtensors of rank-one patterns stay rank one or vanish") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> dims = qtest::random_dims(4, 4, rng);
    std::vector<std::vector<int>> vecs;
    for (int n : dims) vecs.push_back(qtest::random_sign_vector(n, rng));
    SignTensor s = qtest::sign_outer_product(vecs);

    std::vector<std::vector<int>> subsets;
    for (int n : dims) {
      std::vector<int> keep;
      for (int i = 1; i <= n; ++i)
        if (rng.coin()) keep.push_back(i);
      if (keep.empty()) keep.push_back(rng.uniform_int(1, n));
      subsets.push_back(keep);
    }
    SignTensor sub = sign_pattern(subtensor(s.unit_member(), subsets));
    CHECK((is_mr1(sub) || sub.is_zero()));
  }
}
