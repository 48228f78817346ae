#include "qtensor/inverse.hpp"

#include <stdexcept>

#include "qtensor/combinatorics.hpp"
#include "qtensor/tensor_ops.hpp"

namespace qten {

namespace {

bool tail_repeated(const Index& idx) {
  for (std::size_t m = 2; m < idx.size(); ++m)
    if (idx[m] != idx[1]) return false;
  return true;
}

SignMatrix majorization_sign(const SignTensor& s) {
  int n = s.shape().dims[0];
  SignMatrix m(n, n);
  for (const auto& [idx, sign] : s.entries())
    if (tail_repeated(idx)) m.set(idx[0], idx[1], sign);
  return m;
}

void require_cubical_k3(const SignTensor& s) {
  if (!s.shape().is_cubical()) throw std::invalid_argument("sign inverse tests require a cubical tensor");
  if (s.order() < 3) throw std::invalid_argument("sign inverse tests require order >= 3");
}

}  // namespace

SignInverseDecision has_sign_left_inverse_order2(const SignTensor& s) {
  require_cubical_k3(s);
  if (s.shape().dims[0] > 10)
    throw std::invalid_argument("left inverse decision limited to dimension <= 10");
  SignInverseDecision d;
  for (const auto& [idx, sign] : s.entries()) {
    (void)sign;
    if (!tail_repeated(idx)) {
      d.reason = "structure";
      return d;
    }
  }
  if (!is_sns_matrix(majorization_sign(s))) {
    d.reason = "sns";
    return d;
  }
  d.decision = true;
  d.reason = "ok";
  return d;
}

SignInverseDecision has_sign_right_inverse_order2(const SignTensor& s) {
  require_cubical_k3(s);
  SignInverseDecision d;
  int n = s.shape().dims[0];
  int k = s.order();
  std::vector<int> target(n + 1, 0);  // i -> j_i
  std::vector<int> sign_of_slice(n + 1, 0);
  for (const auto& [idx, sign] : s.entries()) {
    if (!tail_repeated(idx)) {
      d.reason = "structure";
      return d;
    }
    if (target[idx[0]] != 0) {  // second nonzero in one slice
      d.reason = "structure";
      return d;
    }
    target[idx[0]] = idx[1];
    sign_of_slice[idx[0]] = sign;
  }
  std::vector<bool> hit(n + 1, false);
  for (int i = 1; i <= n; ++i) {
    if (target[i] == 0) {
      d.reason = "structure";  // empty slice
      return d;
    }
    if (hit[target[i]]) {
      d.reason = "bijection";
      return d;
    }
    hit[target[i]] = true;
  }
  if (k % 2 == 1)
    for (int i = 1; i <= n; ++i)
      if (sign_of_slice[i] < 0) {
        d.reason = "odd-sign";
        return d;
      }
  d.decision = true;
  d.reason = "ok";
  d.perm = std::vector<int>(target.begin() + 1, target.end());
  d.signs = std::vector<int>(sign_of_slice.begin() + 1, sign_of_slice.end());
  return d;
}

std::optional<RationalMatrix> left_inverse_order2(const DenseTensor& a) {
  if (!a.shape().is_cubical() || a.order() < 2)
    throw std::invalid_argument("left inverse requires a cubical tensor of order >= 2");
  for (const auto& [idx, v] : a.entries()) {
    (void)v;
    if (!tail_repeated(idx)) return std::nullopt;
  }
  RationalMatrix p = majorization_matrix(a);
  auto inv = inverse_of(p);
  if (!inv) return std::nullopt;
  if (shao_product(tensor_from_matrix(*inv), a) != make_unit(a.shape().dims[0], a.order()))
    throw std::logic_error("left inverse verification failed");
  return inv;
}

std::optional<RationalMatrix> right_inverse_order2(const DenseTensor& a) {
  if (!a.shape().is_cubical() || a.order() < 2)
    throw std::invalid_argument("right inverse requires a cubical tensor of order >= 2");
  int n = a.shape().dims[0];
  int k = a.order();
  unsigned power = unsigned(k - 1);

  // slice entries keyed by the leading index
  std::vector<std::vector<std::pair<Index, Rational>>> slices(n + 1);
  for (const auto& [idx, v] : a.entries())
    slices[idx[0]].emplace_back(Index(idx.begin() + 1, idx.end()), v);

  RationalMatrix q(n, n);
  for (int i = 1; i <= n; ++i) {
    if (slices[i].empty()) return std::nullopt;
    const auto& [first_idx, first_val] = slices[i].front();

    std::vector<Rational> row(n, Rational(0));
    if (power == 1) {
      for (const auto& [rest, v] : slices[i]) row[rest[0] - 1] = v;
    } else {
      // fiber through the first nonzero, varying the last coordinate
      std::vector<Rational> fiber(n, Rational(0));
      for (const auto& [rest, v] : slices[i]) {
        bool on_fiber = true;
        for (unsigned m = 0; m + 1 < power; ++m)
          if (rest[m] != first_idx[m]) on_fiber = false;
        if (on_fiber) fiber[rest[power - 1] - 1] = v;
      }
      Rational c_pow(1);
      for (unsigned m = 0; m < power; ++m) c_pow *= fiber[first_idx[m] - 1];
      c_pow /= first_val;
      auto c = rational_root(c_pow, power);
      if (!c || sgn(*c) == 0) return std::nullopt;
      for (int t = 0; t < n; ++t) row[t] = fiber[t] / *c;
    }

    // the slice must equal the (k-1)-fold outer power of the row
    DenseTensor expect{Shape(std::vector<int>(power, n))};
    {
      std::vector<std::vector<Rational>> copies(power, row);
      bool zero_row = true;
      for (const auto& x : row)
        if (sgn(x) != 0) zero_row = false;
      if (zero_row) return std::nullopt;
      expect = outer_product(copies);
    }
    DenseTensor actual{Shape(std::vector<int>(power, n))};
    for (const auto& [rest, v] : slices[i]) actual.set(rest, v);
    if (expect != actual) return std::nullopt;

    for (int t = 0; t < n; ++t) q.at(i, t + 1) = row[t];
  }

  auto inv = inverse_of(q);
  if (!inv) return std::nullopt;
  if (shao_product(a, tensor_from_matrix(*inv)) != make_unit(n, k))
    throw std::logic_error("right inverse verification failed");
  return inv;
}

}  // namespace qten
