#pragma once

#include <map>
#include <vector>

#include "qtensor/dense_tensor.hpp"

namespace qten {

// Entries in {-1,+1}, zero implicit. Describes a qualitative class: the
// set of real tensors whose entrywise signs match this pattern.
class SignTensor {
 public:
  SignTensor() = default;
  explicit SignTensor(Shape shape) : shape_(std::move(shape)) {}

  const Shape& shape() const { return shape_; }
  int order() const { return shape_.order(); }

  int at(const Index& idx) const;
  void set(const Index& idx, int sign);

  const std::map<Index, int>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  // The member with every magnitude equal to 1.
  DenseTensor unit_member() const;

  bool operator==(const SignTensor&) const = default;

 private:
  Shape shape_;
  std::map<Index, int> entries_;
};

// One permutation and one +/-1 signing per mode. Encodes the transform
// (D_1 P_1, ..., D_k P_k) . A where P_m maps e_i to e_{perm[m][i-1]} and
// signs[m] is the diagonal of D_m (indexed by target position).
struct SignedPermutation {
  std::vector<std::vector<int>> perms;
  std::vector<std::vector<int>> signs;

  static SignedPermutation identity(const Shape& shape);
};

}  // namespace qten
