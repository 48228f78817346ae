#pragma once

#include <cstdint>

#include "qtensor/sign_tensor.hpp"

namespace qten {

SignTensor sign_pattern(const DenseTensor& a);

struct SampleOptions {
  double lo = 0.1;   // magnitude range, log-uniform
  double hi = 10.0;
};

// Deterministic member of the qualitative class: each nonzero gets an
// independent magnitude drawn log-uniform from [lo,hi], rounded to an
// exact rational. sign_pattern(result) equals the input pattern.
DenseTensor sample_member(const SignTensor& s, std::uint64_t seed, const SampleOptions& opts = {});

SignTensor signed_permute(const SignTensor& s, const SignedPermutation& g);

SignTensor transpose_pq(const SignTensor& s, int p, int q);

// Fixpoint of the slice-deletion rule, cycling modes in ascending order:
// a mode-j slice is deleted when its sign pattern is zero, or equal or
// opposite to an earlier kept slice of the same mode. The zero tensor
// condenses to the 1x...x1 zero tensor.
SignTensor condense(const SignTensor& s);

// Minimum rank over the class is 1 iff the condensation is a single
// nonzero entry.
bool is_mr1(const SignTensor& s);

}  // namespace qten
