#include "qtensor/dense_tensor.hpp"

#include <stdexcept>

namespace qten {

Shape::Shape(std::vector<int> d) : dims(std::move(d)) {
  if (dims.empty()) throw std::invalid_argument("tensor order must be at least 1");
  for (int n : dims)
    if (n < 1) throw std::invalid_argument("every dimension must be at least 1");
}

bool Shape::contains(const Index& idx) const {
  if (idx.size() != dims.size()) return false;
  for (std::size_t m = 0; m < dims.size(); ++m)
    if (idx[m] < 1 || idx[m] > dims[m]) return false;
  return true;
}

bool Shape::is_cubical() const {
  for (int n : dims)
    if (n != dims[0]) return false;
  return true;
}

void DenseTensor::check_index(const Index& idx) const {
  if (!shape_.contains(idx)) throw std::invalid_argument("tensor index out of range");
}

Rational DenseTensor::at(const Index& idx) const {
  check_index(idx);
  auto it = entries_.find(idx);
  return it == entries_.end() ? Rational(0) : it->second;
}

void DenseTensor::set(const Index& idx, const Rational& v) {
  check_index(idx);
  if (sgn(v) == 0)
    entries_.erase(idx);
  else
    entries_[idx] = v;
}

void DenseTensor::add(const Index& idx, const Rational& v) {
  check_index(idx);
  if (sgn(v) == 0) return;
  auto [it, inserted] = entries_.emplace(idx, v);
  if (!inserted) {
    it->second += v;
    if (sgn(it->second) == 0) entries_.erase(it);
  }
}

}  // namespace qten
