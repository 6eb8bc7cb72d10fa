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

// ROC convex hull and the quantities that live on it.
//
// Decisions follow the shared threshold convention: a trial is accepted iff
// its score is >= the threshold.  The hull is built by sorting all scores,
// pooling ties, and running PAV on the target indicator; every PAV block is
// one hull edge.

#ifndef LLRKIT_ROCCH_HPP
#define LLRKIT_ROCCH_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/trial_data.hpp"

namespace llrkit {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// PAV blocks over the pooled, sorted scores.  Block b covers every score in
/// [score_lo[b], score_hi[b]]; blocks are in ascending score order and tied
/// scores always share a block.
struct ScoreBlocks {
  Eigen::VectorXd score_lo;
  Eigen::VectorXd score_hi;
  CountVector targets;
  CountVector nontargets;
  std::int64_t total_targets = 0;
  std::int64_t total_nontargets = 0;

  Eigen::Index size() const { return score_lo.size(); }
  /// Block containing `score`, or -1 if it falls outside every block.
  Eigen::Index find(double score) const;
};

ScoreBlocks pav_score_blocks(const LabeledScores& scores);

/// Vertices of the ROC convex hull, from (p_miss, p_fa) = (1, 0) to (0, 1).
/// Along the sequence p_miss is nonincreasing, p_fa nondecreasing, and
/// consecutive vertices differ.
struct RocchCurve {
  Eigen::VectorXd p_miss;
  Eigen::VectorXd p_fa;
  CountVector miss_count;
  CountVector fa_count;
  std::int64_t targets = 0;
  std::int64_t nontargets = 0;

  Eigen::Index size() const { return p_miss.size(); }
};

RocchCurve rocch(const LabeledScores& scores);
RocchCurve rocch(const ScoreBlocks& blocks);

/// Point on the hull where p_fa = r * p_miss.
struct HullPoint {
  double value = 0.0;  // p_fa at the point
  double p_miss = 0.0;
  double p_fa = 0.0;
};

/// Unequal error rate: the hull point with p_fa = r * p_miss.  Its p_fa equals
/// the maximum over priors of minDCF(prior, r, 1).
HullPoint uer(const RocchCurve& curve, double r);

/// Hull point with p_miss = p_fa; equals the maximum over the effective prior
/// of minDCF(prior, 1, 1).
double rocch_eer(const RocchCurve& curve);

/// Precision-recall break-even point, as an absolute (fractional) error count:
/// the hull point where misses and false alarms are equally many.
double prbep(const LabeledScores& scores);

/// Calibrated log-likelihood-ratios from PAV on the labels; the output is in
/// input order and takes the values +-inf on pure blocks.
LabeledScores pav_llrs(const LabeledScores& scores);

/// Per-block LLR log((t/n) / (T/N)).
Eigen::VectorXd block_llrs(const ScoreBlocks& blocks);

/// Every point of the empirical (steppy) ROC, one per distinct threshold,
/// in the same orientation as RocchCurve.
RocchCurve steppy_roc(const LabeledScores& scores);

}  // namespace llrkit

#endif  // LLRKIT_ROCCH_HPP
