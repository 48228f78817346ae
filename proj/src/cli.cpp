#include "qtensor/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtensor/determinant.hpp"
#include "qtensor/inverse.hpp"
#include "qtensor/qualitative.hpp"
#include "qtensor/rank.hpp"
#include "qtensor/rng.hpp"
#include "qtensor/tensor_io.hpp"

namespace qten {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matching_json(const Matching& m) {
  ordered_json out = ordered_json::array();
  for (const auto& idx : m.entries) out.push_back(idx);
  return out;
}

ordered_json matrix_json(const RationalMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 1; i <= m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 1; j <= m.cols(); ++j) row.push_back(to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json tensor_json(const DenseTensor& a) {
  return ordered_json::parse(tensor_to_json(a));
}

ordered_json factors_json(const FactorList& f) {
  ordered_json comps = ordered_json::array();
  for (const auto& comp : f.components) {
    ordered_json vectors = ordered_json::array();
    for (const auto& vec : comp) {
      ordered_json v = ordered_json::array();
      for (const auto& x : vec) v.push_back(to_string(x));
      vectors.push_back(std::move(v));
    }
    comps.push_back(std::move(vectors));
  }
  return comps;
}

ordered_json certificate_json(const RankCertificate& c) {
  ordered_json j;
  j["kind"] = c.kind == RankCertificate::Kind::upper ? "upper" : "lower";
  j["value"] = c.value;
  j["exact"] = c.exact;
  j["justification"] = c.justification;
  j["residual"] = c.residual;
  if (c.factors) j["factors"] = factors_json(*c.factors);
  if (c.member) j["member"] = tensor_json(*c.member);
  if (c.matching) j["matching"] = matching_json(*c.matching);
  return j;
}

ordered_json bounds_json(const BoundsReport& b) {
  ordered_json j;
  j["mr_low"] = b.mr_low;
  j["mr_low_reason"] = b.mr_low_reason;
  j["mr_high"] = b.mr_high;
  j["mr_high_reason"] = b.mr_high_reason;
  j["term_rank"] = b.term_rank_value;
  j["term_rank_witness"] = matching_json(b.term_rank_witness);
  j["max_rank_low"] = b.max_rank_low;
  j["max_rank_low_reason"] = b.max_rank_low_reason;
  if (b.max_rank_high)
    j["max_rank_high"] = *b.max_rank_high;
  else
    j["max_rank_high"] = nullptr;
  if (b.mr_certificate)
    j["mr_certificate"] = certificate_json(*b.mr_certificate);
  else
    j["mr_certificate"] = nullptr;
  if (b.max_rank_witness)
    j["max_rank_witness"] = tensor_json(*b.max_rank_witness);
  else
    j["max_rank_witness"] = nullptr;
  return j;
}

void emit(std::ostream& out, const ordered_json& j, bool pretty) {
  out << (pretty ? j.dump(2) : j.dump()) << "\n";
}

std::vector<Rational> parse_vector(const std::string& text) {
  std::vector<Rational> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return c == ' '; }),
               item.end());
    v.push_back(parse_rational(item));
  }
  if (v.empty()) throw std::invalid_argument("empty vector literal");
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qualitative tensor analysis: sign patterns, term rank, "
               "determinants and rank bounds over sign classes"};
  app.require_subcommand(1);

  std::string file, file_b, side, xs, out_dir;
  bool pretty = false, strict = false, serial = false;
  std::uint64_t seed = 0;
  int trials = 1000, restarts = 20, iters = 500, r_max = 0, samples = 50, count = 1;

  auto add_common = [&](CLI::App* sub, bool with_file = true) {
    if (with_file) sub->add_option("file", file, "tensor JSON file")->required();
    sub->add_flag("--pretty", pretty, "indent the report");
    sub->add_flag("--serial", serial, "disable the parallel kernels");
    return sub;
  };

  auto* c_analyze = add_common(app.add_subcommand("analyze", "full report for one tensor"));
  c_analyze->add_option("--seed", seed);
  c_analyze->add_option("--restarts", restarts);
  c_analyze->add_option("--r-max", r_max);
  c_analyze->add_option("--samples", samples);

  add_common(app.add_subcommand("condense", "condensed sign pattern"));
  add_common(app.add_subcommand("termrank", "exact term rank with witness"));
  auto* c_mr1 = add_common(app.add_subcommand("mr1", "is the minimum rank 1"));
  c_mr1->add_flag("--strict", strict, "exit 1 when the decision is false");
  add_common(app.add_subcommand("det2", "exact determinant, dimension-2 tensors"));
  add_common(app.add_subcommand("rank222", "exact real rank of a 2x2x2 tensor"));

  auto* c_bounds = add_common(app.add_subcommand("rank-bounds", "certified mr/Mr bounds"));
  c_bounds->add_option("--r-max", r_max);
  c_bounds->add_option("--restarts", restarts);
  c_bounds->add_option("--iters", iters);
  c_bounds->add_option("--seed", seed);
  c_bounds->add_option("--samples", samples);

  auto* c_sns = add_common(app.add_subcommand("sns-check", "sign nonsingularity screens"));
  c_sns->add_option("--trials", trials);
  c_sns->add_option("--seed", seed);
  c_sns->add_flag("--strict", strict, "exit 1 when a counterexample is found");

  auto* c_inv = add_common(app.add_subcommand("sign-inverse", "order-2 sign inverse decision"));
  c_inv->add_option("--side", side, "left or right")->required();
  c_inv->add_flag("--strict", strict, "exit 1 when the decision is false");

  auto* c_prod = app.add_subcommand("product", "general tensor product A.B");
  c_prod->add_option("a", file, "left factor JSON file")->required();
  c_prod->add_option("b", file_b, "right factor JSON file")->required();
  c_prod->add_flag("--pretty", pretty);

  auto* c_apply = add_common(app.add_subcommand("apply", "evaluate A x^{k-1}"));
  c_apply->add_option("--x", xs, "comma separated rational vector")->required();

  auto* c_sample = add_common(app.add_subcommand("sample", "write members of the sign class"));
  c_sample->add_option("--count", count);
  c_sample->add_option("--seed", seed);
  c_sample->add_option("--out", out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  bool parallel = !serial;

  try {
    if (app.got_subcommand("analyze")) {
      DenseTensor a = load_tensor_file(file);
      SignTensor s = sign_pattern(a);
      int pos = 0, neg = 0;
      for (const auto& [idx, sg] : s.entries()) {
        (void)idx;
        (sg > 0 ? pos : neg)++;
      }
      TermRankResult tr = term_rank(s, {parallel});
      SignTensor cond = condense(s);
      ordered_json j;
      j["shape"] = s.shape().dims;
      j["order"] = s.order();
      j["nnz"] = int(s.nnz());
      j["positive"] = pos;
      j["negative"] = neg;
      j["term_rank"] = tr.value;
      j["term_rank_witness"] = matching_json(tr.witness);
      j["mr1"] = is_mr1(s);
      j["condensed_shape"] = cond.shape().dims;
      if (s.shape().is_cubical() && s.shape().dims[0] <= 12) {
        auto rep = sns_tensor_necessary(s, parallel);
        ordered_json nec;
        nec["modes"] = rep.mode_is_l;
        nec["overall"] = rep.overall;
        j["sns_necessary"] = std::move(nec);
      } else {
        j["sns_necessary"] = nullptr;
      }
      BoundsOptions bo;
      bo.seed = seed;
      bo.samples = samples;
      bo.parallel = parallel;
      bo.search.cp.restarts = restarts;
      if (r_max > 0) bo.r_max = r_max;
      j["bounds"] = bounds_json(bounds_report(s, bo));
      j["seed"] = seed;
      ordered_json o;
      o["restarts"] = restarts;
      o["samples"] = samples;
      o["r_max"] = r_max > 0 ? r_max : -1;
      j["options"] = std::move(o);
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("condense")) {
      SignTensor s = sign_pattern(load_tensor_file(file));
      out << sign_tensor_to_json(condense(s), pretty) << "\n";
      return 0;
    }
    if (app.got_subcommand("termrank")) {
      SignTensor s = sign_pattern(load_tensor_file(file));
      TermRankResult tr = term_rank(s, {parallel});
      ordered_json j;
      j["term_rank"] = tr.value;
      j["witness"] = matching_json(tr.witness);
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("mr1")) {
      bool ok = is_mr1(sign_pattern(load_tensor_file(file)));
      ordered_json j;
      j["mr1"] = ok;
      emit(out, j, pretty);
      return strict && !ok ? 1 : 0;
    }
    if (app.got_subcommand("det2")) {
      ordered_json j;
      j["det"] = to_string(det_dim2(load_tensor_file(file)));
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("rank222")) {
      DenseTensor a = load_tensor_file(file);
      ordered_json j;
      j["rank"] = rank_222_exact(a);
      j["hyperdet"] = to_string(hyperdet_222(a));
      j["multilinear_rank"] = multilinear_rank(a).r;
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("rank-bounds")) {
      SignTensor s = sign_pattern(load_tensor_file(file));
      BoundsOptions bo;
      bo.seed = seed;
      bo.samples = samples;
      bo.parallel = parallel;
      bo.search.cp.restarts = restarts;
      bo.search.cp.iters = iters;
      if (r_max > 0) bo.r_max = r_max;
      ordered_json j = bounds_json(bounds_report(s, bo));
      j["seed"] = seed;
      ordered_json o;
      o["restarts"] = restarts;
      o["iters"] = iters;
      o["samples"] = samples;
      o["r_max"] = r_max > 0 ? r_max : -1;
      j["options"] = std::move(o);
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("sns-check")) {
      SignTensor s = sign_pattern(load_tensor_file(file));
      ordered_json j;
      if (s.shape().is_cubical() && s.shape().dims[0] <= 12) {
        auto rep = sns_tensor_necessary(s, parallel);
        ordered_json nec;
        nec["modes"] = rep.mode_is_l;
        nec["overall"] = rep.overall;
        j["necessary"] = std::move(nec);
      } else {
        j["necessary"] = nullptr;
      }
      bool found = false;
      if (s.shape().is_cubical() && s.shape().dims[0] == 2) {
        FalsifyOptions fo;
        fo.trials = trials;
        fo.seed = seed;
        fo.parallel = parallel;
        FalsifyReport rep = sns_falsify_sample(s, fo);
        ordered_json f;
        f["trials"] = rep.trials;
        f["min_abs_det"] = to_string(rep.min_abs_det);
        if (rep.counterexample) {
          found = true;
          f["counterexample"] = tensor_json(*rep.counterexample);
          f["counterexample_trial"] = *rep.counterexample_trial;
        } else {
          f["counterexample"] = nullptr;
          f["counterexample_trial"] = nullptr;
        }
        j["falsification"] = std::move(f);
      } else {
        j["falsification"] = nullptr;
      }
      j["seed"] = seed;
      emit(out, j, pretty);
      return strict && found ? 1 : 0;
    }
    if (app.got_subcommand("sign-inverse")) {
      if (side != "left" && side != "right")
        throw std::invalid_argument("--side must be left or right");
      DenseTensor a = load_tensor_file(file);
      SignTensor s = sign_pattern(a);
      ordered_json j;
      j["side"] = side;
      SignInverseDecision d =
          side == "left" ? has_sign_left_inverse_order2(s) : has_sign_right_inverse_order2(s);
      j["decision"] = d.decision;
      j["reason"] = d.reason;
      if (d.perm)
        j["witness_perm"] = *d.perm;
      else
        j["witness_perm"] = nullptr;
      if (d.signs)
        j["witness_signs"] = *d.signs;
      else
        j["witness_signs"] = nullptr;
      auto inv = side == "left" ? left_inverse_order2(a) : right_inverse_order2(a);
      if (inv)
        j["inverse"] = matrix_json(*inv);
      else
        j["inverse"] = nullptr;
      emit(out, j, pretty);
      return strict && !d.decision ? 1 : 0;
    }
    if (app.got_subcommand("product")) {
      DenseTensor a = load_tensor_file(file);
      DenseTensor b = load_tensor_file(file_b);
      out << tensor_to_json(shao_product(a, b), pretty) << "\n";
      return 0;
    }
    if (app.got_subcommand("apply")) {
      DenseTensor a = load_tensor_file(file);
      std::vector<Rational> x = parse_vector(xs);
      ordered_json j;
      ordered_json result = ordered_json::array();
      for (const auto& v : apply_power(a, x)) result.push_back(to_string(v));
      j["result"] = std::move(result);
      emit(out, j, pretty);
      return 0;
    }
    if (app.got_subcommand("sample")) {
      SignTensor s = sign_pattern(load_tensor_file(file));
      std::filesystem::create_directories(out_dir);
      ordered_json files = ordered_json::array();
      for (int i = 0; i < count; ++i) {
        DenseTensor member = sample_member(s, derive_seed(seed, std::uint64_t(i)));
        char name[32];
        std::snprintf(name, sizeof(name), "member_%03d.json", i);
        std::string path = (std::filesystem::path(out_dir) / name).string();
        save_tensor_file(member, path, pretty);
        files.push_back(path);
      }
      ordered_json j;
      j["seed"] = seed;
      j["count"] = count;
      j["files"] = std::move(files);
      emit(out, j, pretty);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "unknown subcommand\n";
  return 2;
}

}  // namespace qten
