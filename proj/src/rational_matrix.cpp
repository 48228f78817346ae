#include "qtensor/rational_matrix.hpp"

#include <stdexcept>

namespace qten {

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, Rational(0)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 1; i <= n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 1; i <= rows_; ++i)
    for (int j = 1; j <= cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  RationalMatrix out(rows_, rhs.cols_);
  for (int i = 1; i <= rows_; ++i)
    for (int t = 1; t <= cols_; ++t) {
      const Rational& v = at(i, t);
      if (sgn(v) == 0) continue;
      for (int j = 1; j <= rhs.cols_; ++j) out.at(i, j) += v * rhs.at(t, j);
    }
  return out;
}

std::vector<Rational> RationalMatrix::operator*(const std::vector<Rational>& v) const {
  if (int(v.size()) != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<Rational> out(rows_, Rational(0));
  for (int i = 1; i <= rows_; ++i)
    for (int j = 1; j <= cols_; ++j)
      if (sgn(at(i, j)) != 0) out[i - 1] += at(i, j) * v[j - 1];
  return out;
}

namespace {

// Row echelon over Q; returns pivot count. When track_det is non-null the
// matrix must be square and *track_det receives the determinant.
int eliminate(RationalMatrix& m, Rational* track_det) {
  int rows = m.rows(), cols = m.cols();
  Rational det(1);
  int pivot_row = 1;
  for (int col = 1; col <= cols && pivot_row <= rows; ++col) {
    int sel = 0;
    for (int i = pivot_row; i <= rows; ++i)
      if (sgn(m.at(i, col)) != 0) {
        sel = i;
        break;
      }
    if (sel == 0) continue;
    if (sel != pivot_row) {
      for (int j = col; j <= cols; ++j) swap(m.at(sel, j), m.at(pivot_row, j));
      det = -det;
    }
    const Rational pivot = m.at(pivot_row, col);
    det *= pivot;
    for (int i = pivot_row + 1; i <= rows; ++i) {
      if (sgn(m.at(i, col)) == 0) continue;
      Rational factor = m.at(i, col) / pivot;
      m.at(i, col) = 0;
      for (int j = col + 1; j <= cols; ++j)
        if (sgn(m.at(pivot_row, j)) != 0) m.at(i, j) -= factor * m.at(pivot_row, j);
    }
    ++pivot_row;
  }
  int rank = pivot_row - 1;
  if (track_det) *track_det = (rank == rows && rows == cols) ? det : Rational(0);
  return rank;
}

}  // namespace

int rank_of(const RationalMatrix& m) {
  RationalMatrix work = m;
  return eliminate(work, nullptr);
}

Rational det_of(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (m.rows() == 0) return Rational(1);
  RationalMatrix work = m;
  Rational det;
  eliminate(work, &det);
  return det;
}

std::optional<RationalMatrix> inverse_of(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  int n = m.rows();
  RationalMatrix work = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (int col = 1; col <= n; ++col) {
    int sel = 0;
    for (int i = col; i <= n; ++i)
      if (sgn(work.at(i, col)) != 0) {
        sel = i;
        break;
      }
    if (sel == 0) return std::nullopt;
    if (sel != col)
      for (int j = 1; j <= n; ++j) {
        swap(work.at(sel, j), work.at(col, j));
        swap(inv.at(sel, j), inv.at(col, j));
      }
    Rational pivot = work.at(col, col);
    for (int j = 1; j <= n; ++j) {
      work.at(col, j) /= pivot;
      inv.at(col, j) /= pivot;
    }
    for (int i = 1; i <= n; ++i) {
      if (i == col || sgn(work.at(i, col)) == 0) continue;
      Rational factor = work.at(i, col);
      for (int j = 1; j <= n; ++j) {
        work.at(i, j) -= factor * work.at(col, j);
        inv.at(i, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

std::optional<std::vector<Rational>> left_null_vector(const RationalMatrix& m) {
  // Reduced echelon form of m^T; kernel vector of its last free column.
  RationalMatrix t = m.transposed();
  int rows = t.rows(), cols = t.cols();
  std::vector<int> pivot_col;
  int pivot_row = 1;
  for (int col = 1; col <= cols && pivot_row <= rows; ++col) {
    int sel = 0;
    for (int i = pivot_row; i <= rows; ++i)
      if (sgn(t.at(i, col)) != 0) {
        sel = i;
        break;
      }
    if (sel == 0) continue;
    if (sel != pivot_row)
      for (int j = 1; j <= cols; ++j) swap(t.at(sel, j), t.at(pivot_row, j));
    Rational pivot = t.at(pivot_row, col);
    for (int j = col; j <= cols; ++j) t.at(pivot_row, j) /= pivot;
    for (int i = 1; i <= rows; ++i) {
      if (i == pivot_row || sgn(t.at(i, col)) == 0) continue;
      Rational factor = t.at(i, col);
      for (int j = col; j <= cols; ++j) t.at(i, j) -= factor * t.at(pivot_row, j);
    }
    pivot_col.push_back(col);
    ++pivot_row;
  }
  if (int(pivot_col.size()) == cols) return std::nullopt;  // full column rank of m^T
  int free_col = 0;
  {
    std::size_t p = 0;
    for (int col = 1; col <= cols; ++col) {
      if (p < pivot_col.size() && pivot_col[p] == col)
        ++p;
      else
        free_col = col;  // keep the last one
    }
  }
  std::vector<Rational> v(cols, Rational(0));
  v[free_col - 1] = 1;
  for (std::size_t p = 0; p < pivot_col.size(); ++p)
    v[pivot_col[p] - 1] = -t.at(int(p) + 1, free_col);
  return v;
}

}  // namespace qten
