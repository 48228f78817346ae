#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qtensor/rational_matrix.hpp"
#include "qtensor/sign_tensor.hpp"

namespace qten {

class SignMatrix {
 public:
  SignMatrix() = default;
  SignMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // 1-based; values in {-1,0,+1}
  int at(int i, int j) const { return data_[std::size_t(i - 1) * cols_ + (j - 1)]; }
  void set(int i, int j, int v) { data_[std::size_t(i - 1) * cols_ + (j - 1)] = char(v); }

  bool operator==(const SignMatrix&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<char> data_;
};

SignMatrix sign_pattern(const RationalMatrix& m);

// Sign pattern of the mode-s unfolding (a reshape, so it commutes with
// taking signs).
SignMatrix unfold_sign(const SignTensor& s, int mode);

// Set of nonzero positions, no two sharing an index in any mode.
struct Matching {
  std::vector<Index> entries;
  int size() const { return int(entries.size()); }
};

struct TermRankResult {
  int value = 0;
  Matching witness;
};

struct TermRankOptions {
  bool parallel = true;
};

// Exact maximum matching over the support, depth-first branch and bound
// seeded with a greedy incumbent. The parallel kernel splits on the first
// included entry and merges deterministically (max value, lowest branch).
TermRankResult term_rank(const SignTensor& s, const TermRankOptions& opts = {});

// Reference implementation: plain DFS with a shared incumbent.
TermRankResult term_rank_serial(const SignTensor& s);

// True iff every matrix with this sign pattern is nonsingular. Decided by
// enumerating the n! determinant terms; requires square, n <= 10.
bool is_sns_matrix(const SignMatrix& s);

// True iff every matrix with this sign pattern has full row rank. Decided
// by enumerating row signings u in {-1,0,+1}^m (u ~ -u deduplicated):
// the pattern fails iff some nonzero signing leaves every column balanced.
// Requires m <= 12.
bool is_l_matrix(const SignMatrix& s, bool parallel = true);

struct SnsNecessaryReport {
  std::vector<bool> mode_is_l;  // one flag per mode
  bool overall = false;         // all modes pass; necessary for SNS, not sufficient
};

// A sign nonsingular tensor has full multilinear rank across its class,
// so every mode unfolding pattern must be an L-matrix. Cubical, n <= 12.
SnsNecessaryReport sns_tensor_necessary(const SignTensor& s, bool parallel = true);

}  // namespace qten
