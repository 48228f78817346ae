#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "qtensor/combinatorics.hpp"
#include "qtensor/qualitative.hpp"
#include "qtensor/tensor_ops.hpp"

namespace qten {

struct MultilinearRank {
  std::vector<int> r;
  bool operator==(const MultilinearRank&) const = default;
};

// Exact rank of every mode unfolding.
MultilinearRank multilinear_rank(const DenseTensor& a);

struct RankCertificate {
  enum class Kind { upper, lower };
  Kind kind = Kind::lower;
  int value = 0;
  bool exact = true;
  // lower: "term-rank" | "unfolding-rank" | "oracle-222"
  // upper: "als-fit" | "sign-als-fit" | "trivial-cap"
  std::string justification;
  std::optional<FactorList> factors;
  std::optional<DenseTensor> member;
  std::optional<Matching> matching;
  double residual = 0.0;
};

// max_s r_s(A) <= rank(A); exact.
RankCertificate rank_lower_bound(const DenseTensor& a);

// Degree-4 invariant of 2x2x2 tensors whose sign classifies real rank.
Rational hyperdet_222(const DenseTensor& a);

// True iff the invariant vanishes for every member of the class: no
// monomial of it is fully supported on the pattern.
bool hyperdet_222_vanishes_identically(const SignTensor& s);

// Real rank of a 2x2x2 tensor: 0 zero; 1 if multilinear rank (1,1,1);
// 2 if some mode rank is 1 (nonzero case) or full with positive invariant;
// 3 if full with invariant <= 0. Exact.
int rank_222_exact(const DenseTensor& a);

struct CpOptions {
  int restarts = 20;
  int iters = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  double ridge = 1e-12;
  bool parallel = true;
};

struct CpFitResult {
  std::optional<RankCertificate> certificate;
  double best_residual = 1.0;   // min relative residual over executed restarts
  int success_restart = -1;     // lowest restart index that met the tolerance
  bool success() const { return certificate.has_value(); }
};

// Alternating least squares toward a fixed target; success iff the
// relative residual drops below tol. Restarts carry pre-assigned seeds and
// the result is the first success by restart index, independent of
// scheduling.
CpFitResult cp_fit(const DenseTensor& a, int r, const CpOptions& opts = {});

// When r_s(A) < n_s: invertible P, built from a left kernel vector of the
// mode-s unfolding, with the last mode-s slice of (I,..,P,..,I).A zero.
std::optional<std::pair<RationalMatrix, DenseTensor>> mode_compress(const DenseTensor& a, int mode);

struct MrSearchOptions {
  CpOptions cp;
  double clamp_lo = 1e-2;  // member magnitudes projected into [clamp_lo, clamp_hi]
  double clamp_hi = 1e2;
  double sign_margin = 1e-6;
};

// Alternating search for a low-rank member of the class: project the
// current sum onto the sign-consistent set, then one ALS sweep toward the
// projected member. Success yields an upper certificate with the member
// and factors as witness; its sign pattern is rechecked exactly. Failure
// proves nothing.
CpFitResult mr_upper_search(const SignTensor& s, int r, const MrSearchOptions& opts = {});

struct BoundsOptions {
  int r_max = -1;        // <= 0: product of dims excluding the largest
  int samples = 50;      // members probed for the maximum-rank lower bound
  std::uint64_t seed = 0;
  MrSearchOptions search;
  bool parallel = true;
};

struct BoundsReport {
  int mr_low = 0;
  std::string mr_low_reason;   // "zero" | "nonzero" | "sns-structured-family"
  int mr_high = 0;
  std::string mr_high_reason;  // "zero" | "search" | "trivial-cap"
  std::optional<RankCertificate> mr_certificate;
  int term_rank_value = 0;
  Matching term_rank_witness;
  int max_rank_low = 0;
  std::string max_rank_low_reason;  // "zero" | "term-rank" | "member-unfolding" | "member-oracle-222"
  std::optional<DenseTensor> max_rank_witness;
  std::optional<int> max_rank_high;  // only for 2x2x2, where 3 is the ceiling
};

BoundsReport bounds_report(const SignTensor& s, const BoundsOptions& opts = {});

}  // namespace qten
