#pragma once

#include <optional>
#include <vector>

#include "qtensor/rational.hpp"

namespace qten {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);
  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // 1-based accessors
  Rational& at(int i, int j) { return data_[std::size_t(i - 1) * cols_ + (j - 1)]; }
  const Rational& at(int i, int j) const { return data_[std::size_t(i - 1) * cols_ + (j - 1)]; }

  RationalMatrix transposed() const;
  RationalMatrix operator*(const RationalMatrix& rhs) const;
  std::vector<Rational> operator*(const std::vector<Rational>& v) const;

  bool operator==(const RationalMatrix&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Exact Gaussian elimination over Q.
int rank_of(const RationalMatrix& m);
Rational det_of(const RationalMatrix& m);
std::optional<RationalMatrix> inverse_of(const RationalMatrix& m);

// Nonzero v with v^T m = 0, or nullopt when m has full row rank.
// Deterministic: the kernel basis vector of the last free column of m^T,
// with the free coordinate set to 1.
std::optional<std::vector<Rational>> left_null_vector(const RationalMatrix& m);

}  // namespace qten
