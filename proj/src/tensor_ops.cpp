#include "qtensor/tensor_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace qten {

namespace {

bool vector_is_zero(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

}  // namespace

DenseTensor make_unit(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("unit tensor needs n >= 1 and k >= 1");
  DenseTensor t{Shape(std::vector<int>(k, n))};
  for (int i = 1; i <= n; ++i) t.set(Index(k, i), Rational(1));
  return t;
}

DenseTensor tensor_from_matrix(const RationalMatrix& m) {
  DenseTensor t{Shape({m.rows(), m.cols()})};
  for (int i = 1; i <= m.rows(); ++i)
    for (int j = 1; j <= m.cols(); ++j)
      if (sgn(m.at(i, j)) != 0) t.set({i, j}, m.at(i, j));
  return t;
}

DenseTensor outer_product(const std::vector<std::vector<Rational>>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("outer product of zero vectors");
  std::vector<int> dims;
  for (const auto& v : vectors) {
    if (v.empty() || vector_is_zero(v))
      throw std::invalid_argument("outer product requires nonzero vectors");
    dims.push_back(int(v.size()));
  }
  DenseTensor t{Shape(dims)};
  // walk the cartesian product of the supports
  int k = int(vectors.size());
  std::vector<std::vector<int>> support(k);
  for (int m = 0; m < k; ++m)
    for (int i = 0; i < int(vectors[m].size()); ++i)
      if (sgn(vectors[m][i]) != 0) support[m].push_back(i + 1);
  Index idx(k);
  std::vector<int> pos(k, 0);
  while (true) {
    Rational v(1);
    for (int m = 0; m < k; ++m) {
      idx[m] = support[m][pos[m]];
      v *= vectors[m][idx[m] - 1];
    }
    t.set(idx, v);
    int m = k - 1;
    while (m >= 0 && ++pos[m] == int(support[m].size())) pos[m--] = 0;
    if (m < 0) break;
  }
  return t;
}

DenseTensor sum_of_rank_ones(const FactorList& f, const Shape& shape) {
  DenseTensor acc{shape};
  for (const auto& comp : f.components) {
    if (int(comp.size()) != shape.order())
      throw std::invalid_argument("factor tuple order does not match shape");
    for (std::size_t m = 0; m < comp.size(); ++m)
      if (int(comp[m].size()) != shape.dims[m])
        throw std::invalid_argument("factor vector length does not match shape");
    DenseTensor term = outer_product(comp);
    for (const auto& [idx, v] : term.entries()) acc.add(idx, v);
  }
  return acc;
}

DenseTensor transpose_pq(const DenseTensor& a, int p, int q) {
  int k = a.order();
  if (p < 1 || p > k || q < 1 || q > k) throw std::invalid_argument("transpose mode out of range");
  if (p == q) return a;
  std::vector<int> dims = a.shape().dims;
  std::swap(dims[p - 1], dims[q - 1]);
  DenseTensor t{Shape(dims)};
  for (const auto& [idx, v] : a.entries()) {
    Index j = idx;
    std::swap(j[p - 1], j[q - 1]);
    t.set(j, v);
  }
  return t;
}

DenseTensor subtensor(const DenseTensor& a, const std::vector<std::vector<int>>& subsets) {
  int k = a.order();
  if (int(subsets.size()) != k) throw std::invalid_argument("one index subset per mode required");
  std::vector<std::vector<int>> sorted(k);
  // position of an original index within the sorted subset, or 0
  std::vector<std::vector<int>> where(k);
  std::vector<int> dims(k);
  for (int m = 0; m < k; ++m) {
    sorted[m] = subsets[m];
    std::sort(sorted[m].begin(), sorted[m].end());
    sorted[m].erase(std::unique(sorted[m].begin(), sorted[m].end()), sorted[m].end());
    if (sorted[m].empty()) throw std::invalid_argument("empty index subset");
    if (sorted[m].front() < 1 || sorted[m].back() > a.shape().dims[m])
      throw std::invalid_argument("index subset out of range");
    where[m].assign(a.shape().dims[m] + 1, 0);
    for (int pos = 0; pos < int(sorted[m].size()); ++pos) where[m][sorted[m][pos]] = pos + 1;
    dims[m] = int(sorted[m].size());
  }
  DenseTensor t{Shape(dims)};
  for (const auto& [idx, v] : a.entries()) {
    Index j(k);
    bool keep = true;
    for (int m = 0; m < k && keep; ++m) {
      j[m] = where[m][idx[m]];
      keep = j[m] != 0;
    }
    if (keep) t.set(j, v);
  }
  return t;
}

DenseTensor slice(const DenseTensor& a, int mode, int index) {
  int k = a.order();
  if (k < 2) throw std::invalid_argument("slice requires order >= 2");
  if (mode < 1 || mode > k) throw std::invalid_argument("slice mode out of range");
  if (index < 1 || index > a.shape().dims[mode - 1])
    throw std::invalid_argument("slice index out of range");
  std::vector<int> dims;
  for (int m = 0; m < k; ++m)
    if (m != mode - 1) dims.push_back(a.shape().dims[m]);
  DenseTensor t{Shape(dims)};
  for (const auto& [idx, v] : a.entries()) {
    if (idx[mode - 1] != index) continue;
    Index j;
    for (int m = 0; m < k; ++m)
      if (m != mode - 1) j.push_back(idx[m]);
    t.set(j, v);
  }
  return t;
}

RationalMatrix unfold(const DenseTensor& a, int mode) {
  int k = a.order();
  if (mode < 1 || mode > k) throw std::invalid_argument("unfold mode out of range");
  long long ncols = 1;
  for (int m = 0; m < k; ++m)
    if (m != mode - 1) ncols *= a.shape().dims[m];
  RationalMatrix u(a.shape().dims[mode - 1], int(ncols));
  // columns: remaining indices in order, later modes varying fastest
  std::vector<long long> stride(k, 0);
  long long acc = 1;
  for (int m = k - 1; m >= 0; --m) {
    if (m == mode - 1) continue;
    stride[m] = acc;
    acc *= a.shape().dims[m];
  }
  for (const auto& [idx, v] : a.entries()) {
    long long col = 0;
    for (int m = 0; m < k; ++m)
      if (m != mode - 1) col += (idx[m] - 1) * stride[m];
    u.at(idx[mode - 1], int(col) + 1) = v;
  }
  return u;
}

DenseTensor multilinear_transform(const std::vector<RationalMatrix>& mats, const DenseTensor& a) {
  int k = a.order();
  if (int(mats.size()) != k) throw std::invalid_argument("one matrix per mode required");
  std::vector<int> dims(k);
  for (int m = 0; m < k; ++m) {
    if (mats[m].cols() != a.shape().dims[m])
      throw std::invalid_argument("transform matrix columns must match tensor dimension");
    dims[m] = mats[m].rows();
  }
  DenseTensor t{Shape(dims)};
  // scatter each source entry through the per-mode matrix columns
  std::vector<std::vector<int>> support(k);
  Index j(k);
  for (const auto& [idx, v] : a.entries()) {
    for (int m = 0; m < k; ++m) {
      support[m].clear();
      for (int r = 1; r <= mats[m].rows(); ++r)
        if (sgn(mats[m].at(r, idx[m])) != 0) support[m].push_back(r);
      if (support[m].empty()) break;
    }
    bool dead = false;
    for (int m = 0; m < k; ++m)
      if (support[m].empty()) dead = true;
    if (dead) continue;
    std::vector<int> pos(k, 0);
    while (true) {
      Rational w = v;
      for (int m = 0; m < k; ++m) {
        j[m] = support[m][pos[m]];
        w *= mats[m].at(j[m], idx[m]);
      }
      t.add(j, w);
      int m = k - 1;
      while (m >= 0 && ++pos[m] == int(support[m].size())) pos[m--] = 0;
      if (m < 0) break;
    }
  }
  return t;
}

DenseTensor shao_product(const DenseTensor& a, const DenseTensor& b) {
  int m = a.order();
  int k = b.order();
  if (m < 2) throw std::invalid_argument("left factor must have order >= 2");
  if (!a.shape().is_cubical() || !b.shape().is_cubical())
    throw std::invalid_argument("product requires cubical tensors");
  int n = a.shape().dims[0];
  if (b.shape().dims[0] != n) throw std::invalid_argument("product factors must share dimension");

  // mode-1 slices of b as sparse lists of (rest-index, value)
  std::vector<std::vector<std::pair<Index, Rational>>> slices(n + 1);
  for (const auto& [idx, v] : b.entries()) {
    Index rest(idx.begin() + 1, idx.end());
    slices[idx[0]].emplace_back(std::move(rest), v);
  }

  int out_order = (m - 1) * (k - 1) + 1;
  DenseTensor t{Shape(std::vector<int>(out_order, n))};
  Index out(out_order);
  for (const auto& [idx, v] : a.entries()) {
    out[0] = idx[0];
    // one slice factor per trailing index of the a-entry
    std::vector<const std::vector<std::pair<Index, Rational>>*> factors;
    bool dead = false;
    for (int t2 = 1; t2 < m; ++t2) {
      factors.push_back(&slices[idx[t2]]);
      if (factors.back()->empty()) dead = true;
    }
    if (dead) continue;
    std::vector<int> pos(m - 1, 0);
    while (true) {
      Rational w = v;
      int cursor = 1;
      for (int f = 0; f < m - 1; ++f) {
        const auto& [rest, bv] = (*factors[f])[pos[f]];
        w *= bv;
        for (int c : rest) out[cursor++] = c;
      }
      t.add(out, w);
      int f = m - 2;
      while (f >= 0 && ++pos[f] == int(factors[f]->size())) pos[f--] = 0;
      if (f < 0) break;
    }
  }
  return t;
}

std::vector<Rational> apply_power(const DenseTensor& a, const std::vector<Rational>& x) {
  if (!a.shape().is_cubical()) throw std::invalid_argument("apply requires a cubical tensor");
  int n = a.shape().dims[0];
  if (int(x.size()) != n) throw std::invalid_argument("vector length must match dimension");
  std::vector<Rational> out(n, Rational(0));
  for (const auto& [idx, v] : a.entries()) {
    Rational w = v;
    for (std::size_t m = 1; m < idx.size(); ++m) w *= x[idx[m] - 1];
    out[idx[0] - 1] += w;
  }
  return out;
}

RationalMatrix majorization_matrix(const DenseTensor& a) {
  int k = a.order();
  if (k < 2) throw std::invalid_argument("majorization requires order >= 2");
  int n2 = a.shape().dims[1];
  for (int m = 1; m < k; ++m)
    if (a.shape().dims[m] != n2)
      throw std::invalid_argument("majorization requires equal trailing dimensions");
  RationalMatrix out(a.shape().dims[0], n2);
  for (const auto& [idx, v] : a.entries()) {
    bool repeated = true;
    for (int m = 2; m < k; ++m)
      if (idx[m] != idx[1]) repeated = false;
    if (repeated) out.at(idx[0], idx[1]) = v;
  }
  return out;
}

}  // namespace qten
