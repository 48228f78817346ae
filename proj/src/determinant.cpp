#include "qtensor/determinant.hpp"

#include <stdexcept>

#include "qtensor/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qten {

BinaryFormPair to_binary_forms(const DenseTensor& a) {
  if (!a.shape().is_cubical() || a.shape().dims[0] != 2)
    throw std::invalid_argument("binary forms require a cubical dimension-2 tensor");
  int k = a.order();
  BinaryFormPair forms;
  forms.f1.assign(k, Rational(0));
  forms.f2.assign(k, Rational(0));
  for (const auto& [idx, v] : a.entries()) {
    int twos = 0;
    for (int m = 1; m < k; ++m)
      if (idx[m] == 2) ++twos;
    (idx[0] == 1 ? forms.f1 : forms.f2)[twos] += v;
  }
  return forms;
}

Rational sylvester_resultant(const BinaryFormPair& forms) {
  if (forms.f1.size() != forms.f2.size() || forms.f1.size() < 2)
    throw std::invalid_argument("binary forms must share a degree >= 1");
  int d = int(forms.f1.size()) - 1;
  RationalMatrix s(2 * d, 2 * d);
  for (int r = 0; r < d; ++r)
    for (int t = 0; t <= d; ++t) {
      s.at(r + 1, r + t + 1) = forms.f1[t];
      s.at(d + r + 1, r + t + 1) = forms.f2[t];
    }
  return det_of(s);
}

Rational det_dim2(const DenseTensor& a) {
  if (a.order() < 2) throw std::invalid_argument("determinant requires order >= 2");
  return sylvester_resultant(to_binary_forms(a));
}

FalsifyReport sns_falsify_sample(const SignTensor& s, const FalsifyOptions& opts) {
  if (!s.shape().is_cubical() || s.shape().dims[0] != 2)
    throw std::invalid_argument("falsification sampling requires a cubical dimension-2 tensor");
  if (opts.trials < 1) throw std::invalid_argument("at least one trial required");

  FalsifyReport report;
  report.trials = opts.trials;

  // trial 0 probes the all-ones-magnitude member; each trial carries a
  // derived seed, so the aggregate is independent of scheduling
  std::vector<Rational> dets(opts.trials);
  std::vector<DenseTensor> members(opts.trials);
  auto run_trial = [&](int t) {
    members[t] = t == 0 ? s.unit_member() : sample_member(s, derive_seed(opts.seed, t), opts.sample);
    dets[t] = det_dim2(members[t]);
  };

#ifdef _OPENMP
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < opts.trials; ++t) run_trial(t);
  } else {
    for (int t = 0; t < opts.trials; ++t) run_trial(t);
  }
#else
  for (int t = 0; t < opts.trials; ++t) run_trial(t);
#endif

  for (int t = 0; t < opts.trials; ++t) {
    Rational a = abs(dets[t]);
    if (t == 0 || a < report.min_abs_det) report.min_abs_det = a;
    if (sgn(dets[t]) == 0 && !report.counterexample) {
      report.counterexample = members[t];
      report.counterexample_trial = t;
    }
  }
  return report;
}

}  // namespace qten
