#include "qtensor/sign_tensor.hpp"

#include <numeric>
#include <stdexcept>

namespace qten {

int SignTensor::at(const Index& idx) const {
  if (!shape_.contains(idx)) throw std::invalid_argument("tensor index out of range");
  auto it = entries_.find(idx);
  return it == entries_.end() ? 0 : it->second;
}

void SignTensor::set(const Index& idx, int sign) {
  if (!shape_.contains(idx)) throw std::invalid_argument("tensor index out of range");
  if (sign == 0) {
    entries_.erase(idx);
    return;
  }
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be -1, 0 or 1");
  entries_[idx] = sign;
}

DenseTensor SignTensor::unit_member() const {
  DenseTensor t{shape_};
  for (const auto& [idx, s] : entries_) t.set(idx, Rational(s));
  return t;
}

SignedPermutation SignedPermutation::identity(const Shape& shape) {
  SignedPermutation g;
  for (int n : shape.dims) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    g.perms.push_back(std::move(perm));
    g.signs.emplace_back(n, 1);
  }
  return g;
}

}  // namespace qten
