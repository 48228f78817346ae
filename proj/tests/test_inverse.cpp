#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtensor/combinatorics.hpp"
#include "qtensor/determinant.hpp"
#include "qtensor/inverse.hpp"
#include "qtensor/rank.hpp"
#include "qtensor/tensor_ops.hpp"
#include "testutil.hpp"

using namespace qten;

namespace {

// pattern with support (i, j, ..., j) given by a sign matrix
SignTensor structured_pattern(const std::vector<std::vector<int>>& m, int order) {
  int n = int(m.size());
  SignTensor s{Shape(std::vector<int>(order, n))};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (m[i - 1][j - 1] != 0) {
        Index idx(order, j);
        idx[0] = i;
        s.set(idx, m[i - 1][j - 1]);
      }
  return s;
}

// lower triangular signs, nonzero diagonal: exactly one determinant term
std::vector<std::vector<int>> random_triangular_sns(int n, Rng& rng) {
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    m[i][i] = rng.coin() ? 1 : -1;
    for (int j = 0; j < i; ++j) m[i][j] = rng.uniform_int(-1, 1);
  }
  return m;
}

DenseTensor right_family_member(const std::vector<int>& perm, const std::vector<int>& signs,
                                int order, Rng& rng) {
  int n = int(perm.size());
  RationalMatrix q(n, n);
  for (int i = 1; i <= n; ++i) {
    Rational mag = make_rational(rng.uniform_int(1, 9), rng.uniform_int(1, 4));
    q.at(i, perm[i - 1]) = order % 2 == 0 && signs[i - 1] < 0 ? Rational(-mag) : mag;
  }
  return shao_product(make_unit(n, order), tensor_from_matrix(q));
}

}  // namespace

TEST_CASE("left sign inverse decision") {
  CHECK(has_sign_left_inverse_order2(sign_pattern(make_unit(2, 3))).decision);

  SignTensor off{Shape({2, 2, 2})};
  off.set({1, 1, 1}, 1);
  off.set({2, 2, 2}, 1);
  off.set({1, 1, 2}, 1);  // not of the form (i,j,j)
  SignInverseDecision d1 = has_sign_left_inverse_order2(off);
  CHECK_FALSE(d1.decision);
  CHECK(d1.reason == "structure");

  SignTensor bad_m = structured_pattern({{1, 1}, {1, 1}}, 3);
  SignInverseDecision d2 = has_sign_left_inverse_order2(bad_m);
  CHECK_FALSE(d2.decision);
  CHECK(d2.reason == "sns");

  CHECK_THROWS_AS(has_sign_left_inverse_order2(sign_pattern(make_unit(2, 2))),
                  std::invalid_argument);
  CHECK_THROWS_AS(has_sign_left_inverse_order2(SignTensor{Shape({2, 3, 2})}),
                  std::invalid_argument);
}

TEST_CASE("right sign inverse decision") {
  SignInverseDecision unit = has_sign_right_inverse_order2(sign_pattern(make_unit(2, 3)));
  CHECK(unit.decision);
  CHECK(*unit.perm == std::vector<int>{1, 2});
  CHECK(*unit.signs == std::vector<int>{1, 1});

  SignTensor swapped{Shape({2, 2, 2})};
  swapped.set({1, 2, 2}, 1);
  swapped.set({2, 1, 1}, 1);
  SignInverseDecision d = has_sign_right_inverse_order2(swapped);
  CHECK(d.decision);
  CHECK(*d.perm == std::vector<int>{2, 1});

  // odd order forbids negative entries
  SignTensor neg{Shape({2, 2, 2})};
  neg.set({1, 1, 1}, -1);
  neg.set({2, 2, 2}, 1);
  SignInverseDecision dneg = has_sign_right_inverse_order2(neg);
  CHECK_FALSE(dneg.decision);
  CHECK(dneg.reason == "odd-sign");

  // even order allows any signing
  SignTensor neg4{Shape({2, 2, 2, 2})};
  neg4.set({1, 2, 2, 2}, -1);
  neg4.set({2, 1, 1, 1}, 1);
  SignInverseDecision dneg4 = has_sign_right_inverse_order2(neg4);
  CHECK(dneg4.decision);
  CHECK(*dneg4.perm == std::vector<int>{2, 1});
  CHECK(*dneg4.signs == std::vector<int>{-1, 1});

  SignTensor collide{Shape({2, 2, 2})};
  collide.set({1, 1, 1}, 1);
  collide.set({2, 1, 1}, 1);
  CHECK(has_sign_right_inverse_order2(collide).reason == "bijection");

  SignTensor two_per_slice{Shape({2, 2, 2})};
  two_per_slice.set({1, 1, 1}, 1);
  two_per_slice.set({1, 2, 2}, 1);
  two_per_slice.set({2, 2, 2}, 1);
  CHECK(has_sign_right_inverse_order2(two_per_slice).reason == "structure");
}

TEST_CASE("left inverse construction") {
  auto id = left_inverse_order2(make_unit(3, 3));
  REQUIRE(id.has_value());
  CHECK(*id == RationalMatrix::identity(3));

  DenseTensor diag{Shape({2, 2, 2})};
  diag.set({1, 1, 1}, 2);
  diag.set({2, 2, 2}, 3);
  auto inv = left_inverse_order2(diag);
  REQUIRE(inv.has_value());
  CHECK(inv->at(1, 1) == make_rational(1, 2));
  CHECK(inv->at(2, 2) == make_rational(1, 3));
  CHECK(shao_product(tensor_from_matrix(*inv), diag) == make_unit(2, 3));

  DenseTensor off = diag;
  off.set({1, 1, 2}, 1);
  CHECK_FALSE(left_inverse_order2(off).has_value());

  DenseTensor singular{Shape({2, 2, 2})};  // majorization matrix has rank 1
  singular.set({1, 1, 1}, 1);
  singular.set({2, 1, 1}, 1);
  CHECK_FALSE(left_inverse_order2(singular).has_value());
}

TEST_CASE("right inverse construction") {
  auto id = right_inverse_order2(make_unit(3, 3));
  REQUIRE(id.has_value());
  CHECK(*id == RationalMatrix::identity(3));

  RationalMatrix q(2, 2);
  q.at(1, 2) = 2;
  q.at(2, 1) = 3;
  DenseTensor a = shao_product(make_unit(2, 3), tensor_from_matrix(q));
  auto inv = right_inverse_order2(a);
  REQUIRE(inv.has_value());
  CHECK(inv->at(1, 2) == make_rational(1, 3));
  CHECK(inv->at(2, 1) == make_rational(1, 2));
  CHECK(shao_product(a, tensor_from_matrix(*inv)) == make_unit(2, 3));

  CHECK_FALSE(right_inverse_order2(qtest::example41_tensor()).has_value());

  // magnitudes that are not perfect powers have no rational factorization
  DenseTensor irr{Shape({2, 2, 2})};
  irr.set({1, 1, 1}, 2);
  irr.set({2, 2, 2}, 3);
  CHECK_FALSE(right_inverse_order2(irr).has_value());

  // odd powers extract signed roots
  RationalMatrix qn(2, 2);
  qn.at(1, 2) = -2;
  qn.at(2, 1) = 3;
  DenseTensor a4 = shao_product(make_unit(2, 4), tensor_from_matrix(qn));
  CHECK(a4.at({1, 2, 2, 2}) == -8);
  auto inv4 = right_inverse_order2(a4);
  REQUIRE(inv4.has_value());
  CHECK(shao_product(a4, tensor_from_matrix(*inv4)) == make_unit(2, 4));
}

TEST_CASE("structured left family: decisions, members, inverses") {
  Rng rng(83);
  for (int trial = 0; trial < 25; ++trial) {
    int n = rng.uniform_int(2, 4);
    int order = rng.uniform_int(3, 4);
    auto m = random_triangular_sns(n, rng);
    SignTensor s = structured_pattern(m, order);
    SignInverseDecision d = has_sign_left_inverse_order2(s);
    CHECK(d.decision);

    // every accepted pattern passes the necessary SNS screen
    CHECK(sns_tensor_necessary(s).overall);

    // mode-1 signed permutation keeps the decision
    SignedPermutation g = SignedPermutation::identity(s.shape());
    g.perms[0] = qtest::random_signed_permutation(s.shape(), rng).perms[0];
    g.signs[0] = qtest::random_signed_permutation(s.shape(), rng).signs[0];
    CHECK(has_sign_left_inverse_order2(signed_permute(s, g)).decision);

    for (int mem = 0; mem < 5; ++mem) {
      DenseTensor member = sample_member(s, derive_seed(trial, mem));
      auto inv = left_inverse_order2(member);
      REQUIRE(inv.has_value());
      CHECK(shao_product(tensor_from_matrix(*inv), member) == make_unit(n, order));
      // accepted patterns are sign nonsingular: members carry full mode ranks
      CHECK(multilinear_rank(member).r == std::vector<int>(order, n));
    }
  }
}

TEST_CASE("structured right family: decisions, members, inverses") {
  Rng rng(89);
  for (int trial = 0; trial < 25; ++trial) {
    int n = rng.uniform_int(2, 4);
    int order = rng.uniform_int(3, 4);
    std::vector<int> perm(n), signs(n, 1);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    if (order % 2 == 0)
      for (int& x : signs) x = rng.coin() ? 1 : -1;

    SignTensor s{Shape(std::vector<int>(order, n))};
    for (int i = 1; i <= n; ++i) {
      Index idx(order, perm[i - 1]);
      idx[0] = i;
      s.set(idx, signs[i - 1]);
    }
    SignInverseDecision d = has_sign_right_inverse_order2(s);
    REQUIRE(d.decision);
    CHECK(*d.perm == perm);  // the witness is forced, hence unique
    CHECK(*d.signs == signs);
    CHECK(sns_tensor_necessary(s).overall);
    if (n == 2) {
      FalsifyOptions fo;
      fo.trials = 1000;
      CHECK_FALSE(sns_falsify_sample(s, fo).counterexample.has_value());
    }

    for (int mem = 0; mem < 5; ++mem) {
      DenseTensor member = right_family_member(perm, signs, order, rng);
      CHECK(sign_pattern(member) == s);
      auto inv = right_inverse_order2(member);
      REQUIRE(inv.has_value());
      CHECK(shao_product(member, tensor_from_matrix(*inv)) == make_unit(n, order));
    }
  }
}

TEST_CASE("accepted patterns survive the falsification screen") {
  Rng rng(97);
  for (int trial = 0; trial < 10; ++trial) {
    int order = rng.uniform_int(3, 4);
    auto m = random_triangular_sns(2, rng);
    SignTensor s = structured_pattern(m, order);
    REQUIRE(has_sign_left_inverse_order2(s).decision);
    FalsifyOptions fo;
    fo.trials = 1000;
    fo.seed = trial;
    CHECK_FALSE(sns_falsify_sample(s, fo).counterexample.has_value());
  }
}
