#pragma once

#include <optional>
#include <string>

#include "qtensor/sign_tensor.hpp"
#include "qtensor/rational_matrix.hpp"

namespace qten {

struct SignInverseDecision {
  bool decision = false;
  std::string reason;                      // "ok" | "structure" | "sns" | "bijection" | "odd-sign"
  std::optional<std::vector<int>> perm;    // right side: i -> j_i
  std::optional<std::vector<int>> signs;   // right side: diagonal signing
};

// Every member has a second-order left inverse iff the nonzeros sit at
// (i,j,...,j) and the majorization pattern is an SNS matrix. Cubical,
// k >= 3, n <= 10.
SignInverseDecision has_sign_left_inverse_order2(const SignTensor& s);

// Every member has a second-order right inverse iff each mode-1 slice has
// exactly one nonzero, at a repeated index (i, j_i,...,j_i) with i -> j_i
// a bijection, all signs + when k is odd. Witness (P, D) is unique.
// Cubical, k >= 3.
SignInverseDecision has_sign_right_inverse_order2(const SignTensor& s);

// P^{-1} when A = P . unit for the invertible majorization matrix P;
// verified via the product before returning. Cubical.
std::optional<RationalMatrix> left_inverse_order2(const DenseTensor& a);

// Q^{-1} when A = unit . Q for an invertible rational Q, each mode-1
// slice being the (k-1)-fold outer power of one row of Q. The candidate
// row is recovered from the slice's first nonzero fiber; root extraction
// stays in Q, so members without a rational factorization yield nullopt.
std::optional<RationalMatrix> right_inverse_order2(const DenseTensor& a);

}  // namespace qten
