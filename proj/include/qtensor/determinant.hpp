#pragma once

#include <cstdint>
#include <optional>

#include "qtensor/qualitative.hpp"
#include "qtensor/rational_matrix.hpp"
#include "qtensor/tensor_ops.hpp"

namespace qten {

// The two degree-(k-1) binary forms of the polynomial system A x^{k-1} = 0
// for a dimension-2 tensor. coeffs[t] multiplies x1^{k-1-t} x2^t.
struct BinaryFormPair {
  std::vector<Rational> f1, f2;
};

BinaryFormPair to_binary_forms(const DenseTensor& a);

// Determinant of the 2(k-1) x 2(k-1) Sylvester matrix; rows of f1 first.
// Row order fixed so that det of the unit tensor is 1.
Rational sylvester_resultant(const BinaryFormPair& forms);

// Zero iff A x^{k-1} = 0 has a nonzero complex solution. Dimension 2 only.
Rational det_dim2(const DenseTensor& a);

inline Rational det_matrix(const RationalMatrix& m) { return det_of(m); }

struct FalsifyOptions {
  int trials = 1000;
  std::uint64_t seed = 0;
  bool parallel = true;
  SampleOptions sample;
};

struct FalsifyReport {
  std::optional<DenseTensor> counterexample;  // member with det exactly 0
  std::optional<int> counterexample_trial;
  Rational min_abs_det;  // over all trials; evidence only, never proof
  int trials = 0;
};

// Samples members of the class and evaluates det_dim2 exactly. Trial 0 is
// the all-ones-magnitude member; the rest use per-trial derived seeds, so
// the report is deterministic under any scheduling. Dimension 2 cubical.
FalsifyReport sns_falsify_sample(const SignTensor& s, const FalsifyOptions& opts = {});

}  // namespace qten
