// Copyright 2026 The llrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llrkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "CLI11.hpp"
#include "llrkit/calibration.hpp"
#include "llrkit/errors.hpp"
#include "llrkit/metrics.hpp"
#include "llrkit/numeric.hpp"
#include "llrkit/plot.hpp"
#include "llrkit/rocch.hpp"
#include "llrkit/score_io.hpp"
#include "llrkit/synthetic.hpp"
#include "llrkit/trial_data.hpp"

namespace llrkit::cli {
namespace {

// Rejected by a subcommand after parsing; reported like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

ScoreMatrix read_scores(const std::string& path) {
  return with_path(path, [&] { return load_scores(path); });
}
TrialKey read_key(const std::string& path) {
  return with_path(path, [&] { return load_key(path); });
}
QualityMeasures read_quality(const std::string& path) {
  return with_path(path, [&] { return load_quality(path); });
}

CalibrationModel read_model(const std::string& path) {
  return with_path(path, [&] {
    const Bytes b = read_file(path);
    return parse_model(std::string_view(reinterpret_cast<const char*>(b.data()), b.size()));
  });
}

void write_scores(const std::string& path, const ScoreMatrix& s, bool binary) {
  if (binary) {
    write_file(path, encode_scores(s));
  } else {
    write_file(path, emit_text_scores(s));
  }
}

class Table {
 public:
  explicit Table(std::ostream& out) : out_(out) {}
  void row(const std::string& label, double v) { text(label, format_real(v + 0.0)); }
  void row(const std::string& label, std::int64_t v) { text(label, std::to_string(v)); }
  void text(const std::string& label, const std::string& v) {
    std::string l = label;
    if (l.size() < 22) l.resize(22, ' ');
    out_ << l << ' ' << v << '\n';
  }

 private:
  std::ostream& out_;
};

// Name lookup into a score matrix.
class ScoreLookup {
 public:
  explicit ScoreLookup(const ScoreMatrix& s) : s_(s) {
    for (std::size_t i = 0; i < s.model_names().size(); ++i) models_[s.model_names()[i]] = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < s.segment_names().size(); ++j) {
      segments_[s.segment_names()[j]] = static_cast<Eigen::Index>(j);
    }
  }
  std::optional<double> at(const std::string& model, const std::string& segment) const {
    const auto m = models_.find(model);
    const auto g = segments_.find(segment);
    if (m == models_.end() || g == segments_.end() || !s_.valid()(m->second, g->second)) return std::nullopt;
    return s_.scores()(m->second, g->second);
  }

 private:
  const ScoreMatrix& s_;
  std::unordered_map<std::string, Eigen::Index> models_;
  std::unordered_map<std::string, Eigen::Index> segments_;
};

struct Trial {
  std::string model;
  std::string segment;
};

// Labeled trials of a key, model-major, split by class.
struct TrialList {
  std::vector<Trial> tar;
  std::vector<Trial> non;
};

TrialList labeled_trials(const TrialKey& key) {
  TrialList out;
  for (Eigen::Index i = 0; i < key.labels().rows(); ++i) {
    for (Eigen::Index j = 0; j < key.labels().cols(); ++j) {
      const Label l = key.labels()(i, j);
      if (l == Label::Ignored) continue;
      Trial t{key.model_names()[static_cast<std::size_t>(i)], key.segment_names()[static_cast<std::size_t>(j)]};
      (l == Label::Target ? out.tar : out.non).push_back(std::move(t));
    }
  }
  return out;
}

Eigen::VectorXd gather(const ScoreLookup& lookup, const std::vector<Trial>& trials, const std::string& path) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(trials.size()));
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto s = lookup.at(trials[k].model, trials[k].segment);
    if (!s) throw AlignmentError(path + ": no score for trial (" + trials[k].model + ", " + trials[k].segment + ")");
    v(static_cast<Eigen::Index>(k)) = *s;
  }
  return v;
}

QualityPairs gather_quality(const QualityMeasures& mq, const QualityMeasures& sq, const std::vector<Trial>& trials) {
  if (mq.dimension() != sq.dimension()) throw DimensionMismatch("model and segment quality files differ in dimension");
  QualityPairs qp;
  const auto n = static_cast<Eigen::Index>(trials.size());
  qp.q.resize(n, mq.dimension());
  qp.r.resize(n, sq.dimension());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Trial& t = trials[static_cast<std::size_t>(k)];
    const Eigen::Index a = mq.find(t.model);
    const Eigen::Index b = sq.find(t.segment);
    if (a < 0) throw AlignmentError("no quality measures for model '" + t.model + "'");
    if (b < 0) throw AlignmentError("no quality measures for segment '" + t.segment + "'");
    qp.q.row(k) = mq.values().col(a).transpose();
    qp.r.row(k) = sq.values().col(b).transpose();
  }
  return qp;
}

LabeledScores labeled_scores(const std::string& key_path, const std::string& scores_path, std::ostream& err) {
  const TrialKey key = read_key(key_path);
  const ScoreMatrix scores = read_scores(scores_path);
  AlignedScores a = align_scores_to_key(scores, key);
  if (a.missing > 0) err << "warning: " << a.missing << " labeled trials have no score in " << scores_path << '\n';
  return std::move(a.scores);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& p : out) {
    if (p.empty()) throw UsageError("empty entry in file list '" + s + "'");
  }
  return out;
}

// --- operating point flags ---------------------------------------------

struct PriorFlags {
  std::optional<double> ptar;
  std::optional<double> prior;
  double c_miss = 1.0;
  double c_fa = 1.0;

  void add(CLI::App* app) {
    auto* p = app->add_option("--ptar", ptar, "effective target prior");
    auto* q = app->add_option("--prior", prior, "target prior, combined with --cmiss and --cfa");
    p->excludes(q);
    app->add_option("--cmiss", c_miss, "cost of a miss")->needs(q);
    app->add_option("--cfa", c_fa, "cost of a false alarm")->needs(q);
  }
  CostParams costs() const {
    if (prior) return {*prior, c_miss, c_fa};
    return {ptar.value_or(0.5), 1.0, 1.0};
  }
};

// --- subcommands ---------------------------------------------------------

struct ConvertArgs {
  std::string in, out, kind = "scores", to = "binary";
};

void do_convert(const ConvertArgs& a) {
  if (a.kind == "scores") {
    const ScoreMatrix s = read_scores(a.in);
    write_scores(a.out, s, a.to == "binary");
  } else {
    const TrialKey k = read_key(a.in);
    if (a.to == "binary") {
      write_file(a.out, encode_key(k));
    } else {
      write_file(a.out, emit_text_key(k));
    }
  }
}

struct StatsArgs {
  std::string scores, key;
};

void do_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  const ScoreMatrix s = read_scores(a.scores);
  Table t(out);
  t.row("models", static_cast<std::int64_t>(s.model_names().size()));
  t.row("segments", static_cast<std::int64_t>(s.segment_names().size()));
  t.row("trials", static_cast<std::int64_t>(s.valid_count()));
  if (s.valid_count() > 0) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (Eigen::Index i = 0; i < s.valid().rows(); ++i) {
      for (Eigen::Index j = 0; j < s.valid().cols(); ++j) {
        if (!s.valid()(i, j)) continue;
        const double v = s.scores()(i, j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
      }
    }
    t.row("score_min", lo);
    t.row("score_max", hi);
    t.row("score_mean", sum / static_cast<double>(s.valid_count()));
  }
  if (!a.key.empty()) {
    const TrialKey k = read_key(a.key);
    const AlignedScores al = align_scores_to_key(s, k);
    t.row("targets", static_cast<std::int64_t>(al.scores.tar.size()));
    t.row("nontargets", static_cast<std::int64_t>(al.scores.non.size()));
    t.row("unscored_trials", static_cast<std::int64_t>(al.missing));
  }
  (void)err;
}

struct EvalArgs {
  std::string key, scores;
  PriorFlags prior;
  bool llr = false;
};

void do_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const CostParams c = a.prior.costs();
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const LabeledScores s = labeled_scores(a.key, a.scores, err);
  const double pt = effective_prior(c);
  const double norm = std::min(c.prior * c.c_miss, (1.0 - c.prior) * c.c_fa);

  Table t(out);
  if (a.prior.prior) {
    t.row("prior", c.prior);
    t.row("c_miss", c.c_miss);
    t.row("c_fa", c.c_fa);
  }
  t.row("effective_prior", pt);
  t.row("bayes_threshold", bayes_threshold(pt));
  t.row("targets", static_cast<std::int64_t>(s.tar.size()));
  t.row("nontargets", static_cast<std::int64_t>(s.non.size()));
  if (a.llr) {
    const double dcf = actual_dcf(s, c);
    t.row("actual_dcf", dcf);
    t.row("actual_dcf_norm", dcf / norm);
  }
  const RocchCurve hull = rocch(s);
  const MinBayesError mb = min_bayes_error(hull, pt);
  const double scale = c.prior * c.c_miss + (1.0 - c.prior) * c.c_fa;
  t.row("min_dcf", scale * mb.raw);
  t.row("min_dcf_norm", mb.normalized);
  if (a.llr) t.row("cllr", cllr(s));
  t.row("min_cllr", min_cllr(s));
  t.row("rocch_eer", rocch_eer(hull));
  t.row("prbep", prbep(s));
  t.row("min_dcf_misses", mb.miss_count);
  t.row("min_dcf_false_alarms", mb.fa_count);
  const bool ok = mb.miss_count >= kRuleOfThirty && mb.fa_count >= kRuleOfThirty;
  t.text("dr30", ok ? "ok" : "insufficient errors");
}

struct CalibrateArgs {
  std::string method = "affine", dev_key, dev_scores, model_in, model_out, apply, out;
  double ptar = 0.5;
  double llr_clip = 200.0;
  bool binary = false;
};

ScoreMatrix map_scores(const ScoreMatrix& s, const std::function<double(double)>& f) {
  ScoreGrid g = s.scores();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = s.valid()(i, j) ? f(g(i, j)) : 0.0;
  }
  return ScoreMatrix(s.model_names(), s.segment_names(), s.valid(), std::move(g));
}

std::function<double(double)> score_map(const CalibrationModel& model) {
  if (const auto* f = std::get_if<FusionModel>(&model)) {
    if (f->system_count() != 1 || f->quality_matrix) throw DimensionMismatch("model is not a single-system calibration");
    return [m = *f](double s) { return m.offset + m.weights(0) * s; };
  }
  return [m = std::get<PavCalibrationMap>(model)](double s) { return apply_pav_calibration(m, s); };
}

void do_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.apply.empty() && a.out.empty()) throw UsageError("--apply needs --out");
  CalibrationModel model;
  if (!a.model_in.empty()) {
    if (!a.dev_key.empty() || !a.dev_scores.empty()) throw UsageError("--model-in excludes --dev-key and --dev-scores");
    if (a.apply.empty()) throw UsageError("--model-in needs --apply");
    model = read_model(a.model_in);
  } else {
    if (a.dev_key.empty() || a.dev_scores.empty()) throw UsageError("training needs --dev-key and --dev-scores");
    const LabeledScores dev = labeled_scores(a.dev_key, a.dev_scores, err);
    TrainingConfig cfg;
    cfg.pi_tilde = a.ptar;
    cfg.llr_clip = a.llr_clip;
    Table t(out);
    if (a.method == "affine") {
      const FusionFit fit = train_calibration(dev, cfg);
      if (fit.termination != TrTermination::Converged) err << "warning: optimizer stopped before convergence\n";
      t.row("offset", fit.model.offset);
      t.row("scale", fit.model.weights(0));
      t.row("objective", fit.objective);
      model = fit.model;
    } else {
      PavCalibrationMap map = train_pav_calibration(dev, cfg);
      t.row("knots", static_cast<std::int64_t>(map.knot_scores.size()));
      model = std::move(map);
    }
    if (!a.model_out.empty()) write_file(a.model_out, serialize_model(model));
  }
  if (!a.apply.empty()) write_scores(a.out, map_scores(read_scores(a.apply), score_map(model)), a.binary);
}

struct FuseArgs {
  std::string dev_key, dev_scores, quality, model_out, apply, out;
  double ptar = 0.5;
  double ridge = 0.0;
  bool binary = false;
};

void do_fuse(const FuseArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.apply.empty() && a.out.empty()) throw UsageError("--apply needs --out");
  const std::vector<std::string> dev_paths = split_list(a.dev_scores);
  const TrialKey key = read_key(a.dev_key);
  const TrialList trials = labeled_trials(key);

  std::vector<LabeledScores> stack;
  for (const auto& p : dev_paths) {
    const ScoreMatrix s = read_scores(p);
    const ScoreLookup lookup(s);
    stack.emplace_back(gather(lookup, trials.tar, p), gather(lookup, trials.non, p));
  }

  std::optional<QualityMeasures> mq, sq;
  if (!a.quality.empty()) {
    const auto q = split_list(a.quality);
    if (q.size() != 2) throw UsageError("--quality takes MODEL_FILE,SEGMENT_FILE");
    mq = read_quality(q[0]);
    sq = read_quality(q[1]);
  }

  TrainingConfig cfg;
  cfg.pi_tilde = a.ptar;
  cfg.ridge = a.ridge;
  FusionFit fit;
  if (mq) {
    LabeledQuality lq{gather_quality(*mq, *sq, trials.tar), gather_quality(*mq, *sq, trials.non)};
    fit = train_quality_fusion(stack, lq, cfg);
  } else {
    fit = train_fusion(stack, cfg);
  }
  if (fit.termination != TrTermination::Converged) err << "warning: optimizer stopped before convergence\n";

  Table t(out);
  t.row("offset", fit.model.offset);
  for (Eigen::Index i = 0; i < fit.model.weights.size(); ++i) t.row("weight_" + std::to_string(i + 1), fit.model.weights(i));
  if (fit.model.quality_matrix) {
    const auto& w = *fit.model.quality_matrix;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = i; j < w.cols(); ++j) {
        t.row("quality_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), w(i, j));
      }
    }
  }
  t.row("objective", fit.objective);
  if (!a.model_out.empty()) write_file(a.model_out, serialize_model(fit.model));
  if (a.apply.empty()) return;

  const std::vector<std::string> eval_paths = split_list(a.apply);
  if (eval_paths.size() != dev_paths.size()) {
    throw UsageError("--apply needs one score file per fused system");
  }
  std::vector<ScoreMatrix> eval;
  for (const auto& p : eval_paths) eval.push_back(read_scores(p));
  std::vector<ScoreLookup> lookups;
  for (const auto& e : eval) lookups.emplace_back(e);

  // Fused output covers the trials of the first system scored by every system.
  const ScoreMatrix& first = eval.front();
  BoolGrid valid = first.valid();
  ScoreGrid grid = ScoreGrid::Zero(valid.rows(), valid.cols());
  std::vector<Trial> cells;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> where;
  Eigen::MatrixXd x;
  std::vector<Eigen::VectorXd> cols;
  for (Eigen::Index i = 0; i < valid.rows(); ++i) {
    for (Eigen::Index j = 0; j < valid.cols(); ++j) {
      if (!valid(i, j)) continue;
      Trial tr{first.model_names()[static_cast<std::size_t>(i)], first.segment_names()[static_cast<std::size_t>(j)]};
      bool all = true;
      for (const auto& l : lookups) all = all && l.at(tr.model, tr.segment).has_value();
      if (!all) {
        valid(i, j) = false;
        continue;
      }
      cells.push_back(std::move(tr));
      where.emplace_back(i, j);
    }
  }
  x.resize(static_cast<Eigen::Index>(cells.size()), static_cast<Eigen::Index>(lookups.size()));
  for (std::size_t k = 0; k < lookups.size(); ++k) x.col(static_cast<Eigen::Index>(k)) = gather(lookups[k], cells, eval_paths[k]);
  Eigen::VectorXd fused;
  if (mq) {
    const QualityPairs qp = gather_quality(*mq, *sq, cells);
    fused = apply_fusion(fit.model, x, &qp);
  } else {
    fused = apply_fusion(fit.model, x);
  }
  for (std::size_t k = 0; k < where.size(); ++k) grid(where[k].first, where[k].second) = fused(static_cast<Eigen::Index>(k));
  write_scores(a.out, ScoreMatrix(first.model_names(), first.segment_names(), std::move(valid), std::move(grid)),
               a.binary);
}

struct PlotDetArgs {
  std::string key, scores, csv, svg, style = "rocch", title;
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void do_plot_det(const PlotDetArgs& a, std::ostream& err) {
  if (a.csv.empty() && a.svg.empty()) throw UsageError("plot-det needs --csv and/or --svg");
  std::vector<DetCurve> curves;
  for (const auto& p : split_list(a.scores)) {
    const LabeledScores s = labeled_scores(a.key, p, err);
    if (a.style != "steppy") curves.push_back(det_curve(s, DetStyle::Rocch));
    if (a.style != "rocch") curves.push_back(det_curve(s, DetStyle::Steppy));
  }
  if (!a.csv.empty()) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::size_t per = a.style == "both" ? 2 : 1;
      std::string path = a.csv;
      if (curves.size() > per) path = with_suffix(path, "." + std::to_string(i / per + 1));
      if (curves[i].style == DetStyle::Steppy && a.style == "both") path = with_suffix(path, ".steppy");
      write_file(path, emit_csv(curves[i]));
    }
  }
  if (!a.svg.empty()) {
    SvgOptions o;
    o.title = a.title;
    write_file(a.svg, render_svg(curves, o));
  }
}

struct PlotNberArgs {
  std::string key, scores, csv, svg, title;
  double x_min = -10.0, x_max = 0.0;
  int points = 501;
  std::vector<double> opoints;
  bool no_min = false;
};

void do_plot_nber(const PlotNberArgs& a, std::ostream& err) {
  if (a.csv.empty() && a.svg.empty()) throw UsageError("plot-nber needs --csv and/or --svg");
  if (!(a.x_max > a.x_min) || a.points < 2) throw UsageError("grid needs --xmax > --xmin and --points >= 2");
  const Eigen::VectorXd grid = logit_grid(a.x_min, a.x_max, a.points);
  std::vector<NberPlotData> plots;
  const auto paths = split_list(a.scores);
  for (const auto& p : paths) {
    NberPlotData d = nber_curve(labeled_scores(a.key, p, err), grid, !a.no_min);
    d.operating_points = a.opoints;
    d.label = p;
    plots.push_back(std::move(d));
  }
  if (!a.csv.empty()) {
    for (std::size_t i = 0; i < plots.size(); ++i) {
      const std::string path = plots.size() > 1 ? with_suffix(a.csv, "." + std::to_string(i + 1)) : a.csv;
      write_file(path, emit_csv(plots[i]));
    }
  }
  if (!a.svg.empty()) {
    SvgOptions o;
    o.title = a.title;
    write_file(a.svg, render_svg(plots, o));
  }
}

struct BenchArgs {
  Eigen::Index targets = 500000;
  Eigen::Index nontargets = 4500000;
  std::uint64_t seed = 1;
  int thresholds = 501;
};

void do_bench(const BenchArgs& a, std::ostream& out) {
  if (a.targets < 1 || a.nontargets < 1 || a.thresholds < 1) throw UsageError("bench sizes must be positive");
  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };

  const LabeledScores s = gaussian_scores(a.targets, a.nontargets, a.seed);
  const Eigen::VectorXd x = logit_grid(-10.0, 10.0, a.thresholds);
  std::vector<double> eta(x.data(), x.data() + x.size());
  for (double& e : eta) e = -e;

  const auto t0 = clock::now();
  const auto rates = fast_error_rate_sweep(s, eta);
  const auto t1 = clock::now();
  const ScoreBlocks blocks = pav_score_blocks(s);
  const auto t2 = clock::now();

  Table t(out);
  t.row("targets", static_cast<std::int64_t>(a.targets));
  t.row("nontargets", static_cast<std::int64_t>(a.nontargets));
  t.row("seed", static_cast<std::int64_t>(a.seed));
  t.row("thresholds", static_cast<std::int64_t>(a.thresholds));
  t.row("pav_blocks", static_cast<std::int64_t>(blocks.size()));
  t.row("rocch_eer", rocch_eer(rocch(blocks)));
  t.row("p_miss_at_zero", error_rates_at(s, 0.0).p_miss);
  t.row("sweep_seconds", seconds(t1 - t0));
  t.row("sort_pav_seconds", seconds(t2 - t1));
  (void)rates;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluation, calibration and fusion of detection scores", "llrkit"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "convert score or key files between text and binary");
  convert->add_option("--in", conv.in, "input file")->required();
  convert->add_option("--out", conv.out, "output file")->required();
  convert->add_option("--kind", conv.kind, "scores or key")->check(CLI::IsMember({"scores", "key"}));
  convert->add_option("--to", conv.to, "binary or text")->check(CLI::IsMember({"binary", "text"}));

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "summarize a score file");
  stats->add_option("--scores", st.scores, "score file")->required();
  stats->add_option("--key", st.key, "key file");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate scores against a key");
  eval->add_option("--key", ev.key, "key file")->required();
  eval->add_option("--scores", ev.scores, "score file")->required();
  ev.prior.add(eval);
  eval->add_flag("--llr", ev.llr, "scores are log-likelihood-ratios");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "train a calibration and optionally apply it");
  calibrate->add_option("--method", cal.method, "affine or pav")->check(CLI::IsMember({"affine", "pav"}));
  calibrate->add_option("--dev-key", cal.dev_key, "training key");
  calibrate->add_option("--dev-scores", cal.dev_scores, "training scores");
  calibrate->add_option("--model-in", cal.model_in, "apply a saved model instead of training");
  calibrate->add_option("--ptar", cal.ptar, "effective prior of the training objective");
  calibrate->add_option("--llr-clip", cal.llr_clip, "bound on PAV output LLRs");
  calibrate->add_option("--model-out", cal.model_out, "write the trained model here");
  calibrate->add_option("--apply", cal.apply, "score file to calibrate");
  calibrate->add_option("--out", cal.out, "calibrated score output");
  calibrate->add_flag("--binary", cal.binary, "write calibrated scores in binary");

  FuseArgs fu;
  auto* fuse = app.add_subcommand("fuse", "train a linear fusion and optionally apply it");
  fuse->add_option("--dev-key", fu.dev_key, "training key")->required();
  fuse->add_option("--dev-scores", fu.dev_scores, "comma-separated training score files")->required();
  fuse->add_option("--quality", fu.quality, "MODEL_FILE,SEGMENT_FILE quality measures");
  fuse->add_option("--ptar", fu.ptar, "effective prior of the training objective");
  fuse->add_option("--ridge", fu.ridge, "ridge penalty on weights");
  fuse->add_option("--model-out", fu.model_out, "write the trained model here");
  fuse->add_option("--apply", fu.apply, "comma-separated score files to fuse");
  fuse->add_option("--out", fu.out, "fused score output");
  fuse->add_flag("--binary", fu.binary, "write fused scores in binary");

  PlotDetArgs pd;
  auto* plot_det = app.add_subcommand("plot-det", "DET curves as CSV and SVG");
  plot_det->add_option("--key", pd.key, "key file")->required();
  plot_det->add_option("--scores", pd.scores, "comma-separated score files")->required();
  plot_det->add_option("--style", pd.style, "rocch, steppy or both")->check(CLI::IsMember({"rocch", "steppy", "both"}));
  plot_det->add_option("--csv", pd.csv, "CSV output");
  plot_det->add_option("--svg", pd.svg, "SVG output");
  plot_det->add_option("--title", pd.title, "plot title");

  PlotNberArgs pn;
  auto* plot_nber = app.add_subcommand("plot-nber", "normalized Bayes error-rate curves as CSV and SVG");
  plot_nber->add_option("--key", pn.key, "key file")->required();
  plot_nber->add_option("--scores", pn.scores, "comma-separated LLR files")->required();
  plot_nber->add_option("--xmin", pn.x_min, "left end of the logit prior grid");
  plot_nber->add_option("--xmax", pn.x_max, "right end of the logit prior grid");
  plot_nber->add_option("--points", pn.points, "grid size");
  plot_nber->add_option("--opoint", pn.opoints, "logit prior of an operating point to mark")->allow_extra_args(false);
  plot_nber->add_flag("--no-min", pn.no_min, "omit the minimum curve");
  plot_nber->add_option("--csv", pn.csv, "CSV output");
  plot_nber->add_option("--svg", pn.svg, "SVG output");
  plot_nber->add_option("--title", pn.title, "plot title");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "time the error-rate sweep and PAV on synthetic scores");
  bench->add_option("--targets", be.targets, "target trial count");
  bench->add_option("--nontargets", be.nontargets, "non-target trial count");
  bench->add_option("--seed", be.seed, "random seed");
  bench->add_option("--thresholds", be.thresholds, "threshold count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (convert->parsed()) do_convert(conv);
    if (stats->parsed()) do_stats(st, out, err);
    if (eval->parsed()) do_eval(ev, out, err);
    if (calibrate->parsed()) do_calibrate(cal, out, err);
    if (fuse->parsed()) do_fuse(fu, out, err);
    if (plot_det->parsed()) do_plot_det(pd, err);
    if (plot_nber->parsed()) do_plot_nber(pn, err);
    if (bench->parsed()) do_bench(be, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace llrkit::cli
