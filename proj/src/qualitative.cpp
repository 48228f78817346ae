#include "qtensor/qualitative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtensor/rng.hpp"

namespace qten {

SignTensor sign_pattern(const DenseTensor& a) {
  SignTensor s{a.shape()};
  for (const auto& [idx, v] : a.entries()) s.set(idx, sign_of(v));
  return s;
}

DenseTensor sample_member(const SignTensor& s, std::uint64_t seed, const SampleOptions& opts) {
  if (!(opts.lo > 0.0) || !(opts.hi >= opts.lo))
    throw std::invalid_argument("magnitude range must satisfy 0 < lo <= hi");
  DenseTensor t{s.shape()};
  Rng rng(seed);
  for (const auto& [idx, sign] : s.entries()) {  // canonical entry order
    double mag = rng.log_uniform(opts.lo, opts.hi);
    // round to a compact exact rational; fall back to the exact dyadic
    // when rounding would collapse the magnitude to zero
    Rational r = make_rational(long(std::llround(mag * 1e6)), 1000000);
    if (sgn(r) == 0) r = rational_from_double(mag);
    t.set(idx, sign > 0 ? r : Rational(-r));
  }
  return t;
}

SignTensor signed_permute(const SignTensor& s, const SignedPermutation& g) {
  int k = s.order();
  if (int(g.perms.size()) != k || int(g.signs.size()) != k)
    throw std::invalid_argument("signed permutation order mismatch");
  for (int m = 0; m < k; ++m) {
    int n = s.shape().dims[m];
    if (int(g.perms[m].size()) != n || int(g.signs[m].size()) != n)
      throw std::invalid_argument("signed permutation dimension mismatch");
    std::vector<bool> seen(n + 1, false);
    for (int v : g.perms[m]) {
      if (v < 1 || v > n || seen[v]) throw std::invalid_argument("mode permutation is not bijective");
      seen[v] = true;
    }
    for (int d : g.signs[m])
      if (d != 1 && d != -1) throw std::invalid_argument("signing entries must be +1 or -1");
  }
  SignTensor out{s.shape()};
  for (const auto& [idx, sign] : s.entries()) {
    Index j(k);
    int v = sign;
    for (int m = 0; m < k; ++m) {
      j[m] = g.perms[m][idx[m] - 1];
      v *= g.signs[m][j[m] - 1];
    }
    out.set(j, v);
  }
  return out;
}

SignTensor transpose_pq(const SignTensor& s, int p, int q) {
  int k = s.order();
  if (p < 1 || p > k || q < 1 || q > k) throw std::invalid_argument("transpose mode out of range");
  if (p == q) return s;
  std::vector<int> dims = s.shape().dims;
  std::swap(dims[p - 1], dims[q - 1]);
  SignTensor out{Shape(dims)};
  for (const auto& [idx, sign] : s.entries()) {
    Index j = idx;
    std::swap(j[p - 1], j[q - 1]);
    out.set(j, sign);
  }
  return out;
}

namespace {

// signature of a mode-j slice: sorted (rest-index, sign) pairs
using Signature = std::vector<std::pair<Index, int>>;

Signature slice_signature(const SignTensor& s, int mode, int index) {
  Signature sig;
  for (const auto& [idx, sign] : s.entries()) {
    if (idx[mode - 1] != index) continue;
    Index rest;
    for (int m = 0; m < s.order(); ++m)
      if (m != mode - 1) rest.push_back(idx[m]);
    sig.emplace_back(std::move(rest), sign);
  }
  return sig;  // entry map order keeps this sorted
}

bool same_or_opposite(const Signature& a, const Signature& b) {
  if (a.size() != b.size()) return false;
  bool all_same = true, all_opp = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) return false;
    all_same = all_same && a[i].second == b[i].second;
    all_opp = all_opp && a[i].second == -b[i].second;
  }
  return all_same || all_opp;
}

// one deletion pass over a single mode; returns true if anything was dropped
bool condense_mode(SignTensor& s, int mode) {
  int n = s.shape().dims[mode - 1];
  std::vector<Signature> sigs(n + 1);
  for (int i = 1; i <= n; ++i) sigs[i] = slice_signature(s, mode, i);
  std::vector<int> kept;
  for (int i = 1; i <= n; ++i) {
    if (sigs[i].empty()) continue;
    bool dup = false;
    for (int j : kept)
      if (same_or_opposite(sigs[j], sigs[i])) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(i);
  }
  if (int(kept.size()) == n) return false;
  std::vector<int> where(n + 1, 0);
  for (int pos = 0; pos < int(kept.size()); ++pos) where[kept[pos]] = pos + 1;
  std::vector<int> dims = s.shape().dims;
  dims[mode - 1] = int(kept.size());
  SignTensor out{Shape(dims)};
  for (const auto& [idx, sign] : s.entries()) {
    if (where[idx[mode - 1]] == 0) continue;
    Index j = idx;
    j[mode - 1] = where[idx[mode - 1]];
    out.set(j, sign);
  }
  s = std::move(out);
  return true;
}

}  // namespace

SignTensor condense(const SignTensor& s) {
  if (s.is_zero()) return SignTensor{Shape(std::vector<int>(s.order(), 1))};
  SignTensor out = s;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int mode = 1; mode <= out.order(); ++mode) changed |= condense_mode(out, mode);
  }
  return out;
}

bool is_mr1(const SignTensor& s) {
  SignTensor c = condense(s);
  for (int n : c.shape().dims)
    if (n != 1) return false;
  return c.nnz() == 1;
}

}  // namespace qten
