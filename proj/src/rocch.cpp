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

#include "llrkit/rocch.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "llrkit/errors.hpp"
#include "llrkit/pav.hpp"

namespace llrkit {
namespace {

// Distinct score values in ascending order with their label counts.
struct Runs {
  std::vector<double> score;
  std::vector<std::int64_t> targets;
  std::vector<std::int64_t> nontargets;
};

void require_both_classes(const LabeledScores& s, const char* what) {
  if (s.tar.size() == 0 || s.non.size() == 0) {
    throw DegenerateInput(std::string(what) + " needs at least one target and one non-target score");
  }
  if (s.tar.hasNaN() || s.non.hasNaN()) throw InvalidArgument(std::string(what) + ": NaN score");
}

Runs collapse_runs(const LabeledScores& s) {
  std::vector<double> tar(s.tar.begin(), s.tar.end());
  std::vector<double> non(s.non.begin(), s.non.end());
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());

  Runs r;
  r.score.reserve(tar.size() + non.size());
  r.targets.reserve(tar.size() + non.size());
  r.nontargets.reserve(tar.size() + non.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < tar.size() || j < non.size()) {
    const double v = j == non.size() || (i < tar.size() && tar[i] < non[j]) ? tar[i] : non[j];
    std::int64_t t = 0;
    std::int64_t n = 0;
    while (i < tar.size() && tar[i] == v) ++i, ++t;
    while (j < non.size() && non[j] == v) ++j, ++n;
    r.score.push_back(v);
    r.targets.push_back(t);
    r.nontargets.push_back(n);
  }
  return r;
}

// Walks blocks from the highest score down, accepting one block per step.
RocchCurve accumulate(const CountVector& targets, const CountVector& nontargets, std::int64_t total_t,
                      std::int64_t total_n) {
  const Eigen::Index nb = targets.size();
  RocchCurve c;
  c.targets = total_t;
  c.nontargets = total_n;
  c.miss_count.resize(nb + 1);
  c.fa_count.resize(nb + 1);
  std::int64_t miss = total_t;
  std::int64_t fa = 0;
  c.miss_count(0) = miss;
  c.fa_count(0) = fa;
  for (Eigen::Index b = nb - 1, k = 1; b >= 0; --b, ++k) {
    miss -= targets(b);
    fa += nontargets(b);
    c.miss_count(k) = miss;
    c.fa_count(k) = fa;
  }
  c.p_miss = c.miss_count.cast<double>() / static_cast<double>(total_t);
  c.p_fa = c.fa_count.cast<double>() / static_cast<double>(total_n);
  return c;
}

}  // namespace

Eigen::Index ScoreBlocks::find(double score) const {
  const double* begin = score_lo.data();
  const double* end = begin + score_lo.size();
  const double* it = std::upper_bound(begin, end, score);
  if (it == begin) return -1;
  const Eigen::Index b = (it - begin) - 1;
  return score <= score_hi(b) ? b : -1;
}

ScoreBlocks pav_score_blocks(const LabeledScores& scores) {
  require_both_classes(scores, "PAV");
  const Runs runs = collapse_runs(scores);
  const auto nr = static_cast<Eigen::Index>(runs.score.size());

  Eigen::VectorXd sums(nr);
  Eigen::VectorXd weights(nr);
  for (Eigen::Index k = 0; k < nr; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    sums(k) = static_cast<double>(runs.targets[uk]);
    weights(k) = static_cast<double>(runs.targets[uk] + runs.nontargets[uk]);
  }
  const PavBlocks<double> pav = pav_fit_sums(sums, weights);

  const auto nb = static_cast<Eigen::Index>(pav.block_count());
  ScoreBlocks out;
  out.score_lo.resize(nb);
  out.score_hi.resize(nb);
  out.targets.resize(nb);
  out.nontargets.resize(nb);
  out.total_targets = scores.tar.size();
  out.total_nontargets = scores.non.size();
  std::size_t run = 0;
  for (Eigen::Index b = 0; b < nb; ++b) {
    const std::size_t len = pav.sizes[static_cast<std::size_t>(b)];
    out.score_lo(b) = runs.score[run];
    out.score_hi(b) = runs.score[run + len - 1];
    out.targets(b) = static_cast<std::int64_t>(pav.sums[static_cast<std::size_t>(b)]);
    out.nontargets(b) = static_cast<std::int64_t>(pav.weights[static_cast<std::size_t>(b)]) - out.targets(b);
    run += len;
  }
  assert(run == runs.score.size());
  return out;
}

RocchCurve rocch(const ScoreBlocks& blocks) {
  return accumulate(blocks.targets, blocks.nontargets, blocks.total_targets, blocks.total_nontargets);
}

RocchCurve rocch(const LabeledScores& scores) { return rocch(pav_score_blocks(scores)); }

HullPoint uer(const RocchCurve& curve, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("uer: r must be positive and finite");
  if (curve.size() < 2) throw DegenerateInput("uer: hull needs at least two vertices");

  // g = p_fa - r p_miss is strictly increasing along the hull, from -r to 1.
  auto g = [&](Eigen::Index k) { return curve.p_fa(k) - r * curve.p_miss(k); };
  for (Eigen::Index k = 1; k < curve.size(); ++k) {
    const double gb = g(k);
    if (gb < 0.0) continue;
    if (gb == 0.0) return {curve.p_fa(k), curve.p_miss(k), curve.p_fa(k)};
    const double ga = g(k - 1);
    const double t = -ga / (gb - ga);
    const double pm = curve.p_miss(k - 1) + t * (curve.p_miss(k) - curve.p_miss(k - 1));
    const double pf = curve.p_fa(k - 1) + t * (curve.p_fa(k) - curve.p_fa(k - 1));
    return {pf, pm, pf};
  }
  // Unreachable for a well-formed hull ending at (0, 1).
  const Eigen::Index last = curve.size() - 1;
  return {curve.p_fa(last), curve.p_miss(last), curve.p_fa(last)};
}

double rocch_eer(const RocchCurve& curve) { return uer(curve, 1.0).value; }

double prbep(const LabeledScores& scores) {
  require_both_classes(scores, "PRBEP");
  const auto t = static_cast<double>(scores.tar.size());
  const auto n = static_cast<double>(scores.non.size());
  return n * uer(rocch(scores), t / n).value;
}

Eigen::VectorXd block_llrs(const ScoreBlocks& blocks) {
  const auto total_t = static_cast<double>(blocks.total_targets);
  const auto total_n = static_cast<double>(blocks.total_nontargets);
  Eigen::VectorXd llr(blocks.size());
  for (Eigen::Index b = 0; b < blocks.size(); ++b) {
    const auto t = static_cast<double>(blocks.targets(b));
    const auto n = static_cast<double>(blocks.nontargets(b));
    if (t == 0.0) {
      llr(b) = -std::numeric_limits<double>::infinity();
    } else if (n == 0.0) {
      llr(b) = std::numeric_limits<double>::infinity();
    } else {
      // Integer products are exact, so a block at the training odds maps to 0.
      llr(b) = std::log((t * total_n) / (n * total_t));
    }
  }
  return llr;
}

LabeledScores pav_llrs(const LabeledScores& scores) {
  const ScoreBlocks blocks = pav_score_blocks(scores);
  const Eigen::VectorXd llr = block_llrs(blocks);
  auto map = [&](const Eigen::VectorXd& in) {
    Eigen::VectorXd out(in.size());
    for (Eigen::Index i = 0; i < in.size(); ++i) {
      const Eigen::Index b = blocks.find(in(i));
      assert(b >= 0);
      out(i) = llr(b);
    }
    return out;
  };
  return LabeledScores(map(scores.tar), map(scores.non));
}

RocchCurve steppy_roc(const LabeledScores& scores) {
  require_both_classes(scores, "ROC");
  const Runs runs = collapse_runs(scores);
  const auto nr = static_cast<Eigen::Index>(runs.score.size());
  CountVector t(nr);
  CountVector n(nr);
  for (Eigen::Index k = 0; k < nr; ++k) {
    t(k) = runs.targets[static_cast<std::size_t>(k)];
    n(k) = runs.nontargets[static_cast<std::size_t>(k)];
  }
  return accumulate(t, n, scores.tar.size(), scores.non.size());
}

}  // namespace llrkit
