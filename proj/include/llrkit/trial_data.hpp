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

// Dense trial lists: indexes, keys, score matrices and quality measures.
//
// A trial is a (model, segment) pair.  All containers store a model-major
// grid over their two name lists; names are exact byte strings.

#ifndef LLRKIT_TRIAL_DATA_HPP
#define LLRKIT_TRIAL_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace llrkit {

using NameList = std::vector<std::string>;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ScoreGrid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Trial label; the numeric values are the on-disk cell bytes.
enum class Label : std::uint8_t { Ignored = 0, Target = 1, NonTarget = 2 };

using LabelGrid = Eigen::Array<Label, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Which (model, segment) pairs are in a trial list.
class TrialIndex {
 public:
  TrialIndex() = default;
  TrialIndex(NameList models, NameList segments, BoolGrid valid);

  const NameList& model_names() const { return models_; }
  const NameList& segment_names() const { return segments_; }
  const BoolGrid& valid() const { return valid_; }

 private:
  NameList models_;
  NameList segments_;
  BoolGrid valid_;
};

/// Target / non-target / ignored label for every cell of a trial grid.
class TrialKey {
 public:
  TrialKey() = default;
  TrialKey(NameList models, NameList segments, LabelGrid labels);

  const NameList& model_names() const { return models_; }
  const NameList& segment_names() const { return segments_; }
  const LabelGrid& labels() const { return labels_; }
  Label label(Eigen::Index model, Eigen::Index segment) const {
    return labels_(model, segment);
  }

  std::size_t target_count() const;
  std::size_t nontarget_count() const;

  /// Index of the trials that carry a label.
  TrialIndex to_index() const;

 private:
  NameList models_;
  NameList segments_;
  LabelGrid labels_;
};

/// Dense score matrix plus validity mask.  Invalid cells hold no meaningful
/// value; valid cells are always finite.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(NameList models, NameList segments, BoolGrid valid, ScoreGrid scores);

  const NameList& model_names() const { return models_; }
  const NameList& segment_names() const { return segments_; }
  const BoolGrid& valid() const { return valid_; }
  const ScoreGrid& scores() const { return scores_; }

  std::size_t valid_count() const { return static_cast<std::size_t>(valid_.count()); }
  TrialIndex to_index() const { return TrialIndex(models_, segments_, valid_); }

 private:
  NameList models_;
  NameList segments_;
  BoolGrid valid_;
  ScoreGrid scores_;
};

/// Per-model or per-segment quality vectors, one column per id.
class QualityMeasures {
 public:
  QualityMeasures() = default;
  QualityMeasures(NameList ids, Eigen::MatrixXd values);

  const NameList& ids() const { return ids_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index dimension() const { return values_.rows(); }

  /// Column for `id`, or -1 when absent.
  Eigen::Index find(const std::string& id) const;

 private:
  NameList ids_;
  Eigen::MatrixXd values_;
};

/// Flat target and non-target score (or LLR) sequences.
struct LabeledScores {
  Eigen::VectorXd tar;
  Eigen::VectorXd non;

  LabeledScores() = default;
  LabeledScores(Eigen::VectorXd t, Eigen::VectorXd n) : tar(std::move(t)), non(std::move(n)) {}
  LabeledScores(std::initializer_list<double> t, std::initializer_list<double> n);
  LabeledScores(std::span<const double> t, std::span<const double> n);

  Eigen::Index target_count() const { return tar.size(); }
  Eigen::Index nontarget_count() const { return non.size(); }
};

struct AlignedScores {
  LabeledScores scores;
  /// Labeled trials with no valid score.
  std::size_t missing = 0;
};

/// Collects scores at labeled cells in model-major order of the key.
AlignedScores align_scores_to_key(const ScoreMatrix& scores, const TrialKey& key);

/// Union of two score objects; throws OverlapError if a trial is valid in both.
ScoreMatrix merge_scores(const ScoreMatrix& a, const ScoreMatrix& b);

/// Restricts `scores` to the names it shares with `index`, and to the trials
/// valid in both.  Throws EmptySelection when no common grid remains.
ScoreMatrix filter_by_index(const ScoreMatrix& scores, const TrialIndex& index);

ScoreMatrix filter_by_name_lists(const ScoreMatrix& scores, std::span<const std::string> keep_models,
                                 std::span<const std::string> keep_segments);
TrialKey filter_by_name_lists(const TrialKey& key, std::span<const std::string> keep_models,
                              std::span<const std::string> keep_segments);

}  // namespace llrkit

#endif  // LLRKIT_TRIAL_DATA_HPP
