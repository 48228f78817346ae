#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtensor/determinant.hpp"
#include "testutil.hpp"

using namespace qten;

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

Rational rational_pow(const Rational& q, long long e) {
  Rational r(1);
  for (long long i = 0; i < e; ++i) r *= q;
  return r;
}

}  // namespace

TEST_CASE("binary forms") {
  BinaryFormPair unit = to_binary_forms(make_unit(2, 3));
  CHECK(unit.f1 == std::vector<Rational>{1, 0, 0});
  CHECK(unit.f2 == std::vector<Rational>{0, 0, 1});

  BinaryFormPair remark = to_binary_forms(qtest::remark_tensor());
  CHECK(remark.f1 == std::vector<Rational>{2, 0, 3});
  CHECK(remark.f2 == std::vector<Rational>{0, 3, 0});

  DenseTensor m{Shape({2, 2})};
  m.set({1, 1}, 4);
  m.set({1, 2}, -1);
  m.set({2, 2}, 7);
  BinaryFormPair rows = to_binary_forms(m);
  CHECK(rows.f1 == std::vector<Rational>{4, -1});
  CHECK(rows.f2 == std::vector<Rational>{0, 7});

  CHECK_THROWS_AS(to_binary_forms(make_unit(3, 3)), std::invalid_argument);
}

TEST_CASE("dimension-2 determinant") {
  for (int k = 2; k <= 5; ++k) CHECK(det_dim2(make_unit(2, k)) == 1);

  CHECK(det_dim2(qtest::remark_tensor()) == 54);

  DenseTensor f2_zero{Shape({2, 2, 2})};  // second polynomial identically zero
  f2_zero.set({1, 1, 1}, 1);
  f2_zero.set({1, 2, 2}, 5);
  CHECK(det_dim2(f2_zero) == 0);

  // a zero mode-1 slice forces determinant zero
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    DenseTensor t = qtest::random_integer_tensor({2, 2, 2}, -4, 4, rng);
    for (int j = 1; j <= 2; ++j)
      for (int l = 1; l <= 2; ++l) t.set({2, j, l}, 0);
    CHECK(det_dim2(t) == 0);
  }
}

TEST_CASE("matrix determinant") {
  CHECK(det_matrix(RationalMatrix::identity(3)) == 1);

  RationalMatrix d(2, 2);
  d.at(1, 1) = 2;
  d.at(2, 2) = 3;
  CHECK(det_matrix(d) == 6);

  RationalMatrix sing(2, 2);
  sing.at(1, 1) = 1;
  sing.at(1, 2) = 2;
  sing.at(2, 1) = 2;
  sing.at(2, 2) = 4;
  CHECK(det_matrix(sing) == 0);

  // agreement with the resultant route on 2x2 matrices
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    DenseTensor t = qtest::random_integer_tensor({2, 2}, -6, 6, rng);
    CHECK(det_dim2(t) == det_matrix(unfold(t, 1)));
  }
}

TEST_CASE("product rule for dimension-2 determinants") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    int m = rng.uniform_int(2, 3);
    int k = rng.uniform_int(2, 3);
    DenseTensor a = qtest::random_integer_tensor(std::vector<int>(m, 2), -5, 5, rng);
    DenseTensor b = qtest::random_integer_tensor(std::vector<int>(k, 2), -5, 5, rng);
    Rational lhs = det_dim2(shao_product(a, b));
    Rational rhs = rational_pow(det_dim2(a), ipow(k - 1, 1)) *
                   rational_pow(det_dim2(b), ipow(m - 1, 2));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("determinant homogeneity") {
  Rng rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    int k = rng.uniform_int(2, 4);
    DenseTensor a = qtest::random_integer_tensor(std::vector<int>(k, 2), -4, 4, rng);
    Rational c = make_rational(rng.uniform_int(1, 5), rng.uniform_int(1, 3));
    if (rng.coin()) c = -c;
    DenseTensor scaled{a.shape()};
    for (const auto& [idx, v] : a.entries()) scaled.set(idx, c * v);
    CHECK(det_dim2(scaled) == rational_pow(c, 2 * (k - 1)) * det_dim2(a));
  }
}

TEST_CASE("falsification sampling") {
  FalsifyOptions opts;
  opts.trials = 1000;
  opts.seed = 0;

  FalsifyReport remark = sns_falsify_sample(sign_pattern(qtest::remark_tensor()), opts);
  CHECK_FALSE(remark.counterexample.has_value());
  CHECK(remark.min_abs_det > 0);

  // the all-ones probe is singular for the fully positive matrix pattern
  SignTensor all_plus{Shape({2, 2})};
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) all_plus.set({i, j}, 1);
  FalsifyReport f = sns_falsify_sample(all_plus, opts);
  REQUIRE(f.counterexample.has_value());
  CHECK(*f.counterexample_trial == 0);
  CHECK(det_dim2(*f.counterexample) == 0);
  for (const auto& [idx, v] : f.counterexample->entries()) {
    (void)idx;
    CHECK(abs(v) == 1);
  }

  FalsifyReport z = sns_falsify_sample(SignTensor{Shape({2, 2, 2})}, opts);
  REQUIRE(z.counterexample.has_value());
  CHECK(*z.counterexample_trial == 0);

  CHECK_THROWS_AS(sns_falsify_sample(SignTensor{Shape({3, 3})}, opts), std::invalid_argument);
}
