#pragma once

#include <map>
#include <vector>

#include "qtensor/rational.hpp"

namespace qten {

// Multi-index with 1-based components, one per mode.
using Index = std::vector<int>;

struct Shape {
  std::vector<int> dims;  // n_1..n_k, every dim >= 1

  Shape() = default;
  explicit Shape(std::vector<int> d);

  int order() const { return int(dims.size()); }
  int dim(int mode) const { return dims[mode - 1]; }  // mode is 1-based
  bool contains(const Index& idx) const;
  bool is_cubical() const;

  bool operator==(const Shape&) const = default;
};

// Order-k tensor with exact rational entries, stored sparsely: absent
// index means 0, stored values are nonzero. Entry maps are canonically
// ordered, so equality is equality of maps.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {}

  const Shape& shape() const { return shape_; }
  int order() const { return shape_.order(); }

  Rational at(const Index& idx) const;
  void set(const Index& idx, const Rational& v);
  void add(const Index& idx, const Rational& v);

  const std::map<Index, Rational>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  bool operator==(const DenseTensor&) const = default;

 private:
  void check_index(const Index& idx) const;

  Shape shape_;
  std::map<Index, Rational> entries_;
};

// r rank-one components; components[j][m] is the mode-(m+1) vector of
// component j. Vectors of a component are nonzero.
struct FactorList {
  std::vector<std::vector<std::vector<Rational>>> components;
  int rank() const { return int(components.size()); }
};

}  // namespace qten
