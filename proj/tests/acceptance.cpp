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

// Acceptance checks.  Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "llrkit/calibration.hpp"
#include "llrkit/metrics.hpp"
#include "llrkit/pav.hpp"
#include "llrkit/plot.hpp"
#include "llrkit/rocch.hpp"
#include "llrkit/score_io.hpp"
#include "llrkit/synthetic.hpp"
#include "oracles.hpp"

namespace {

using namespace llrkit;
using Vec = Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double logistic_of(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Exhaustive Bayes error minimum from precomputed counts at every threshold.
struct ExhaustiveCounts {
  std::vector<double> p_miss, p_fa;
  ExhaustiveCounts(const oracle::Vec& t, const oracle::Vec& n) {
    for (double eta : oracle::all_thresholds(t, n)) {
      const auto r = oracle::rates_at(t, n, eta);
      p_miss.push_back(r.p_miss);
      p_fa.push_back(r.p_fa);
    }
  }
  double min_error(double pt) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < p_miss.size(); ++k) best = std::min(best, pt * p_miss[k] + (1 - pt) * p_fa[k]);
    return best;
  }
};

Outcome criterion1() {
  const double pt = effective_prior({0.01, 10, 1});
  const double x = OperatingPoint::from_prior(0.001).x();
  char two[32], three[32];
  std::snprintf(two, sizeof two, "%.2g", pt);
  std::snprintf(three, sizeof three, "%.3g", x);
  const bool ok = std::abs(pt - 0.0917) <= 5e-5 && std::string(two) == "0.092" && std::abs(x + 6.907) <= 5e-4 &&
                  std::string(three) == "-6.91";
  return {ok, fmt("pi~=%.6f x(0.001)=%.6f", pt, x)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<int> size(1, 2000);
  const Vec grid = logit_grid(-10, 10, 501);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, std::size_t(size(rng)), std::size_t(size(rng)), 1.0);
    const ExhaustiveCounts ex(t, n);
    const RocchCurve hull = rocch(LabeledScores(t, n));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double pt = logistic_of(grid(i));
      worst = std::max(worst, std::abs(min_bayes_error(hull, pt).raw - ex.min_error(pt)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 30, fmt("max |hull - exhaustive| = %.3g over 100 datasets x 501 priors, %.1f s", worst, secs)};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const oracle::Vec values = {0, 0.25, 0.5, 0.75, 1};
  // Every weighted mean of up to 8 quarter-lattice values lies on the 1/3360
  // lattice, so restricting fits to it loses nothing.
  oracle::Vec levels;
  for (int k = 0; k <= 3360; ++k) levels.push_back(k / 3360.0);
  double worst_partition = 0, worst_grid = 0;
  long datasets = 0;
  for (int n = 1; n <= 8; ++n) {
    std::vector<int> digits(std::size_t(n), 0);
    for (;;) {
      oracle::Vec y(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n), 1.0);
      Vec ye(n);
      for (int i = 0; i < n; ++i) ye(i) = y[std::size_t(i)] = values[std::size_t(digits[std::size_t(i)])];
      const Vec fit = pav_fit(ye).expand();
      double sse = 0;
      for (int i = 0; i < n; ++i) sse += (ye(i) - fit(i)) * (ye(i) - fit(i));
      bool monotone = true;
      for (int i = 1; i < n; ++i) monotone = monotone && fit(i - 1) <= fit(i);
      if (!monotone) worst_partition = std::numeric_limits<double>::infinity();
      const auto part = oracle::isotonic_by_partitions(y, w);
      for (int i = 0; i < n; ++i) worst_partition = std::max(worst_partition, std::abs(fit(i) - part.values[std::size_t(i)]));
      worst_grid = std::max(worst_grid, std::abs(sse - oracle::best_grid_monotone_sse(y, w, levels)));
      ++datasets;
      int k = 0;
      while (k < n && ++digits[std::size_t(k)] == 5) digits[std::size_t(k++)] = 0;
      if (k == n) break;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_partition <= 1e-12 && worst_grid <= 1e-12 && secs < 60;
  return {ok, fmt("%.0f datasets: max |fit - partition oracle| = %.3g, max |SSE - grid oracle| = %.3g, %.1f s",
                  double(datasets), worst_partition, worst_grid, secs)};
}

Outcome criterion4() {
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<int> size(1, 300);
  const int points = 501;
  bool ok = true;
  double worst_excess = 0, worst_gap_ratio = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, std::size_t(size(rng)), std::size_t(size(rng)), 1.0);
    const ExhaustiveCounts ex(t, n);
    const double eer = rocch_eer(rocch(LabeledScores(t, n)));
    double grid_max = 0, max_gap = 0, prev = 0;
    for (int i = 0; i < points; ++i) {
      const double pt = double(i) / (points - 1);
      const double f = ex.min_error(pt);
      if (f > eer + 1e-12) ok = false;
      worst_excess = std::max(worst_excess, f - eer);
      grid_max = std::max(grid_max, f);
      if (i > 0) max_gap = std::max(max_gap, std::abs(f - prev));
      prev = f;
    }
    if (eer - grid_max > max_gap + 1e-12) ok = false;
    if (max_gap > 0) worst_gap_ratio = std::max(worst_gap_ratio, (eer - grid_max) / max_gap);
  }
  return {ok, fmt("max(minDCF - EER) = %.3g; max (EER - grid max) / grid gap = %.3f", worst_excess, worst_gap_ratio)};
}

Outcome criterion5() {
  std::mt19937_64 rng(5005);
  std::uniform_int_distribution<int> size(1, 500);
  const Vec grid = logit_grid(-10, 10, 501);
  double worst = 0;
  int datasets = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, std::size_t(size(rng)), std::size_t(size(rng)), 1.0);
    const LabeledScores s(t, n);
    const auto map = train_pav_calibration(s);
    // The clip is inactive when it lies beyond every grid threshold: a
    // clipped LLR then makes the same decisions as an infinite one.
    if (map.llr_clip <= grid.cwiseAbs().maxCoeff()) continue;
    ++datasets;
    const LabeledScores cal = apply_pav_calibration(map, s);
    const ExhaustiveCounts ex(t, n);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double pt = logistic_of(grid(i));
      const double actual = actual_bayes_error(cal, pt).normalized;
      const double minimum = ex.min_error(pt) / std::min(pt, 1 - pt);
      worst = std::max(worst, std::abs(actual - minimum));
    }
  }
  return {worst <= 1e-9 && datasets == 100,
          fmt("%.0f datasets x 501 priors: max |actual - min| normalized = %.3g", datasets, worst)};
}

Outcome criterion6() {
  const LabeledScores zero(Vec::Zero(10), Vec::Zero(10));
  const double c0 = cllr(zero);
  const double d1 = cllr(LabeledScores({1.0, 2.0}, {0.0, 1.5}));
  const double d1_oracle = oracle::cllr({1.0, 2.0}, {0.0, 1.5});
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<int> size(1, 500);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, std::size_t(size(rng)), std::size_t(size(rng)), 1.5);
    const LabeledScores s(t, n);
    if (min_cllr(s) > cllr(s)) ++violations;
  }
  const bool ok = c0 == 1.0 && std::abs(d1 - 1.0224) <= 1e-3 && std::abs(d1 - d1_oracle) <= 1e-12 && violations == 0;
  return {ok, fmt("default = %.17g, D1 = %.6f (oracle %.6f), min_cllr > cllr in %.0f of 100", c0, d1, d1_oracle,
                  violations)};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const GaussianScoreModel model;
  const LabeledScores raw = gaussian_scores(100000, 1000000, 7);
  auto mapped = [&](const std::function<double(double)>& f) {
    return LabeledScores(raw.tar.unaryExpr([&](double s) { return f(model.llr(s)); }),
                         raw.non.unaryExpr([&](double s) { return f(model.llr(s)); }));
  };
  const Vec grid = logit_grid(-10, 4, 501);
  const NberPlotData truth = nber_curve(mapped([](double l) { return l; }), grid);
  if (!truth.dr30.x_fa30 || !truth.dr30.x_miss30) return {false, "rule-of-30 markers missing"};
  const double lo = *truth.dr30.x_fa30, hi = *truth.dr30.x_miss30;
  auto inside = [&](Eigen::Index i) { return grid(i) >= lo && grid(i) <= hi; };

  double worst_rel = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (inside(i)) worst_rel = std::max(worst_rel, std::abs(truth.actual(i) - truth.minimum(i)) / truth.minimum(i));
  }
  const std::vector<std::pair<const char*, std::function<double(double)>>> bad = {
      {"l+2", [](double l) { return l + 2; }},
      {"l-2", [](double l) { return l - 2; }},
      {"2l", [](double l) { return 2 * l; }},
      {"0.5l", [](double l) { return 0.5 * l; }}};
  double worst_frac = 1;
  double half_max = 0;
  std::string per;
  for (const auto& [name, f] : bad) {
    const NberPlotData p = nber_curve(mapped(f), grid, false);
    int in = 0, above = 0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (!inside(i)) continue;
      ++in;
      above += p.actual(i) >= truth.actual(i);
    }
    const double frac = in ? double(above) / in : 0.0;
    worst_frac = std::min(worst_frac, frac);
    per += std::string(" ") + name + "=" + fmt("%.3f", frac);
    if (std::string(name) == "0.5l") half_max = p.actual.maxCoeff();
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_rel <= 0.10 && worst_frac >= 0.95 && half_max <= 1.0 && secs < 120;
  return {ok, fmt("markers [%.2f, %.2f], max rel(actual-min) = %.4f, 0.5l max = %.4f,", lo, hi, worst_rel, half_max) +
                  " fraction above truth:" + per + fmt(", %.1f s", secs)};
}

Outcome criterion8() {
  std::mt19937_64 rng(8008);
  std::normal_distribution<double> z;
  std::vector<LabeledScores> stack;
  for (int k = 0; k < 2; ++k) {
    auto [t, n] = oracle::random_dataset(rng, 200, 300, 1.0 + k, 0.0);
    stack.emplace_back(t, n);
  }
  LabeledQuality q;
  auto fill = [&](Eigen::Index rows) {
    Eigen::MatrixXd m(rows, 2);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
    return m;
  };
  q.tar = {fill(200), fill(200)};
  q.non = {fill(300), fill(300)};
  const WlrObjective obj(stack, &q, 0.3, 1e-3);
  double worst_g = 0, worst_h = 0;
  for (int rep = 0; rep < 10; ++rep) {
    Vec theta(obj.dimension()), v(obj.dimension());
    for (auto& x : theta) x = 0.3 * z(rng);
    for (auto& x : v) x = z(rng);
    const double h = 1e-6;
    Vec g(obj.dimension()), fd(obj.dimension());
    obj.value_and_gradient(theta, &g);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Vec e = Vec::Zero(theta.size());
      e(i) = h;
      fd(i) = (obj.value(theta + e) - obj.value(theta - e)) / (2 * h);
    }
    worst_g = std::max(worst_g, (g - fd).norm() / fd.norm());
    Vec gp(theta.size()), gm(theta.size());
    obj.value_and_gradient(theta + h * v, &gp);
    obj.value_and_gradient(theta - h * v, &gm);
    const Vec fd_hv = (gp - gm) / (2 * h);
    worst_h = std::max(worst_h, (obj.hessian_times(theta, v) - fd_hv).norm() / fd_hv.norm());
  }
  // Equal variances: llr = (mu / var) s - mu^2 / (2 var).
  const GaussianScoreModel m{2.0, 1.5, 0.0, 1.5};
  const auto fit = train_calibration(gaussian_scores(100000, 100000, 88, m));
  const double var = m.tar_sd * m.tar_sd;
  const double b = m.tar_mean / var, a = -m.tar_mean * m.tar_mean / (2 * var);
  const double eb = std::abs(fit.model.weights(0) - b) / b, ea = std::abs(fit.model.offset - a) / std::abs(a);
  const bool ok = worst_g <= 1e-5 && worst_h <= 1e-4 && eb <= 0.05 && ea <= 0.05;
  return {ok, fmt("FD rel err grad %.2g, Hv %.2g; slope err %.4f, offset err %.4f", worst_g, worst_h, eb, ea)};
}

Outcome criterion9() {
  const LabeledScores s = gaussian_scores(500000, 4500000, 9);
  const Vec x = logit_grid(-10, 10, 501);
  std::vector<double> th(x.begin(), x.end());
  auto t0 = Clock::now();
  const auto rates = fast_error_rate_sweep(s, th);
  const double sweep = seconds_since(t0);
  t0 = Clock::now();
  const ScoreBlocks blocks = pav_score_blocks(s);
  const double pav = seconds_since(t0);

  // The same 5e6 scores as a dense 1000 x 5000 matrix.
  NameList models, segs;
  for (int i = 0; i < 1000; ++i) models.push_back("model" + std::to_string(i));
  for (int j = 0; j < 5000; ++j) segs.push_back("segment" + std::to_string(j));
  ScoreGrid g(1000, 5000);
  for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = k < s.tar.size() ? s.tar(k) : s.non(k - s.tar.size());
  const ScoreMatrix mat(models, segs, BoolGrid::Constant(1000, 5000, true), g);
  t0 = Clock::now();
  const Bytes bin = encode_scores(mat);
  const ScoreMatrix back = decode_scores(bin);
  const double io = seconds_since(t0);
  const bool lossless = (back.scores().array() == mat.scores().array()).all() && (back.valid() == mat.valid()).all() &&
                        back.model_names() == models && back.segment_names() == segs;
  const std::size_t text = emit_text_scores(mat).size();
  const bool ok = sweep < 10 && pav < 10 && lossless && bin.size() < text && rates.size() == 501 && blocks.size() > 0;
  return {ok, fmt("sweep %.2f s, sort+PAV %.2f s, binary round trip %.2f s, ", sweep, pav, io) +
                  (lossless ? "lossless" : "LOSSY") + fmt(", binary/text size %.3f", double(bin.size()) / double(text))};
}

Outcome criterion10() {
  struct Case {
    std::vector<double> tar, non;
    double eta;
    std::int64_t misses, fas;
  };
  const double third = 0.1 + 0.2;  // 0.30000000000000004
  const std::vector<Case> cases = {
      {{0}, {0}, 0, 0, 1},
      {{1, 1}, {1}, 1, 0, 1},
      {{0.5, 0.5, 2}, {0.5, -1}, 0.5, 0, 1},
      {{0.5, 0.5, 2}, {0.5, -1}, 2, 2, 0},
      {{-3, -3, -3}, {-3, -3}, -3, 0, 2},
      {{-3, -3, -3}, {-3, -3}, -2, 3, 0},
      {{0, 0, 1}, {0, 0, 1}, 0, 0, 3},
      {{0, 0, 1}, {0, 0, 1}, 1, 2, 1},
      {{2.5}, {2.5, 2.5, 2.5}, 2.5, 0, 3},
      {{1e-300, 0}, {0}, 0, 0, 1},
      {{-0.0}, {0.0}, 0.0, 0, 1},
      {{0.0}, {-0.0}, -0.0, 0, 1},
      {{1, 2, 3}, {2, 2, 2}, 2, 1, 3},
      {{1, 2, 3}, {2, 2, 2}, 3, 2, 0},
      {{1, 1, 1, 1}, {0, 1}, 1, 0, 1},
      {{third}, {0.3}, 0.3, 0, 1},
      {{0.3}, {third}, third, 1, 1},
      {{5, 5}, {4, 5}, 4, 0, 2},
      {{-1, -1}, {-1, -1}, -1, 0, 2},
      {{7, -7, 7}, {7, -7}, -7, 0, 2},
  };
  int failures = 0;
  for (const auto& c : cases) {
    const LabeledScores s(c.tar, c.non);
    const ErrorRates one = error_rates_at(s, c.eta);
    const std::vector<double> th = {std::nextafter(c.eta, -INFINITY), c.eta, std::nextafter(c.eta, INFINITY)};
    const auto sweep = fast_error_rate_sweep(s, th);
    const bool ok = one.miss_count == c.misses && one.fa_count == c.fas && sweep[1].miss_count == c.misses &&
                    sweep[1].fa_count == c.fas && sweep[0].miss_count <= c.misses && sweep[2].fa_count <= c.fas;
    failures += !ok;
  }
  return {failures == 0, fmt("%.0f cases, %.0f mismatches", double(cases.size()), failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"effective prior", criterion1},   {"hull equivalence", criterion2}, {"PAV oracle", criterion3},
      {"ROCCH-EER identity", criterion4}, {"PAV calibration", criterion5}, {"Cllr anchors", criterion6},
      {"Bayes error plot", criterion7},  {"optimizer", criterion8},        {"performance", criterion9},
      {"tie convention", criterion10}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
