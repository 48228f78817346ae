#pragma once

#include <vector>

#include "qtensor/dense_tensor.hpp"
#include "qtensor/rational_matrix.hpp"

namespace qten {

// Unit tensor of order k, dimension n: 1 on the diagonal, 0 elsewhere.
DenseTensor make_unit(int n, int k);

// A matrix viewed as an order-2 tensor.
DenseTensor tensor_from_matrix(const RationalMatrix& m);

// Segre outer product of k nonzero vectors.
DenseTensor outer_product(const std::vector<std::vector<Rational>>& vectors);

DenseTensor sum_of_rank_ones(const FactorList& f, const Shape& shape);

// Swap modes p and q (1-based) in shape and in every index.
DenseTensor transpose_pq(const DenseTensor& a, int p, int q);

// Subtensor keeping the given index subsets, re-indexed by the sorted
// subsets. Every subset must be non-empty and within bounds.
DenseTensor subtensor(const DenseTensor& a, const std::vector<std::vector<int>>& subsets);

// Order k-1 slice with mode j fixed at index i. Requires order >= 2.
DenseTensor slice(const DenseTensor& a, int mode, int index);

// Mode-s unfolding: n_s rows; columns run over the remaining indices in
// lexicographic order with later modes varying fastest.
RationalMatrix unfold(const DenseTensor& a, int mode);

// Entrywise multilinear transform (L_1,...,L_k) . A; L_i is c_i x n_i.
DenseTensor multilinear_transform(const std::vector<RationalMatrix>& mats, const DenseTensor& a);

// General tensor product of cubical tensors: A order m >= 2, B order
// k >= 1, both dimension n; the result has order (m-1)(k-1)+1.
DenseTensor shao_product(const DenseTensor& a, const DenseTensor& b);

// (A x^{k-1})_i = sum a_{i i2..ik} x_{i2}...x_{ik}; A cubical.
std::vector<Rational> apply_power(const DenseTensor& a, const std::vector<Rational>& x);

// m_{ij} = a_{ij...j}; requires all modes past the first to share one dimension.
RationalMatrix majorization_matrix(const DenseTensor& a);

}  // namespace qten
