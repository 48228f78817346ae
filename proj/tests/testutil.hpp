#pragma once

// Shared test fixtures: the two worked tensors from the source material and
// small random generators. The generators are independent of the library's
// samplers so they can serve as oracles.

#include <vector>

#include "qtensor/dense_tensor.hpp"
#include "qtensor/qualitative.hpp"
#include "qtensor/rng.hpp"
#include "qtensor/tensor_ops.hpp"

namespace qtest {

using namespace qten;

// order 3, dimension 2: a111=2, a122=3, a212=3 (sign nonsingular, all
// members have rank 3)
inline DenseTensor remark_tensor() {
  DenseTensor a{Shape({2, 2, 2})};
  a.set({1, 1, 1}, 2);
  a.set({1, 2, 2}, 3);
  a.set({2, 1, 2}, 3);
  return a;
}

// order 3, dimension 2: a111=2, a122=1, a211=1, a212=-1, a221=1, a222=1
// (term rank 2, every member has rank 3)
inline DenseTensor example41_tensor() {
  DenseTensor a{Shape({2, 2, 2})};
  a.set({1, 1, 1}, 2);
  a.set({1, 2, 2}, 1);
  a.set({2, 1, 1}, 1);
  a.set({2, 1, 2}, -1);
  a.set({2, 2, 1}, 1);
  a.set({2, 2, 2}, 1);
  return a;
}

inline DenseTensor random_integer_tensor(const std::vector<int>& dims, int lo, int hi, Rng& rng) {
  DenseTensor a{Shape(dims)};
  Index idx(dims.size(), 1);
  while (true) {
    a.set(idx, make_rational(rng.uniform_int(lo, hi)));
    int m = int(dims.size()) - 1;
    while (m >= 0 && ++idx[m] > dims[m]) idx[m--] = 1;
    if (m < 0) break;
  }
  return a;
}

inline SignTensor random_pattern(const std::vector<int>& dims, double density, Rng& rng) {
  SignTensor s{Shape(dims)};
  Index idx(dims.size(), 1);
  while (true) {
    if (rng.uniform01() < density) s.set(idx, rng.coin() ? 1 : -1);
    int m = int(dims.size()) - 1;
    while (m >= 0 && ++idx[m] > dims[m]) idx[m--] = 1;
    if (m < 0) break;
  }
  return s;
}

inline std::vector<int> random_dims(int max_order, int max_dim, Rng& rng, int min_order = 2) {
  int k = rng.uniform_int(min_order, max_order);
  std::vector<int> dims(k);
  for (int& d : dims) d = rng.uniform_int(1, max_dim);
  return dims;
}

// nonzero sign vector of a given length
inline std::vector<int> random_sign_vector(int n, Rng& rng) {
  std::vector<int> v(n, 0);
  while (true) {
    for (int& x : v) {
      double u = rng.uniform01();
      x = u < 0.25 ? 0 : (u < 0.625 ? 1 : -1);
    }
    for (int x : v)
      if (x != 0) return v;
  }
}

inline SignTensor sign_outer_product(const std::vector<std::vector<int>>& vecs) {
  std::vector<std::vector<Rational>> rv;
  for (const auto& v : vecs) {
    std::vector<Rational> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
    rv.push_back(std::move(r));
  }
  return sign_pattern(outer_product(rv));
}

inline SignedPermutation random_signed_permutation(const Shape& shape, Rng& rng) {
  SignedPermutation g = SignedPermutation::identity(shape);
  for (std::size_t m = 0; m < g.perms.size(); ++m) {
    auto& p = g.perms[m];
    for (int i = int(p.size()) - 1; i > 0; --i) std::swap(p[i], p[rng.uniform_int(0, i)]);
    for (auto& d : g.signs[m]) d = rng.coin() ? 1 : -1;
  }
  return g;
}

inline RationalMatrix random_integer_matrix(int rows, int cols, int lo, int hi, Rng& rng) {
  RationalMatrix m(rows, cols);
  for (int i = 1; i <= rows; ++i)
    for (int j = 1; j <= cols; ++j) m.at(i, j) = make_rational(rng.uniform_int(lo, hi));
  return m;
}

// random product of elementary row operations: unimodular, hence invertible
inline RationalMatrix random_invertible_matrix(int n, Rng& rng) {
  RationalMatrix m = RationalMatrix::identity(n);
  for (int step = 0; step < 3 * n; ++step) {
    int i = rng.uniform_int(1, n);
    int j = rng.uniform_int(1, n);
    if (i == j) {
      for (int c = 1; c <= n; ++c) m.at(i, c) = -m.at(i, c);
      continue;
    }
    Rational f = make_rational(rng.uniform_int(-2, 2));
    for (int c = 1; c <= n; ++c) m.at(i, c) += f * m.at(j, c);
  }
  return m;
}

}  // namespace qtest
