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

#include "llrkit/trial_data.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "llrkit/errors.hpp"

namespace llrkit {
namespace {

using NameMap = std::unordered_map<std::string, Eigen::Index>;

NameMap make_name_map(const NameList& names) {
  NameMap map;
  map.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) map.emplace(names[i], static_cast<Eigen::Index>(i));
  return map;
}

void check_unique(const NameList& names, const char* what) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(names.size());
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw InvariantError(std::string("duplicate ") + what + " name '" + n + "'");
  }
}

template <typename Grid>
void check_shape(const NameList& models, const NameList& segments, const Grid& grid) {
  if (grid.rows() != static_cast<Eigen::Index>(models.size()) ||
      grid.cols() != static_cast<Eigen::Index>(segments.size())) {
    throw InvariantError("grid is " + std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()) +
                         " but name lists are " + std::to_string(models.size()) + "x" +
                         std::to_string(segments.size()));
  }
}

// Positions (in `from`) of the names kept by `keep`, in the order of `from`.
std::vector<Eigen::Index> kept_positions(const NameList& from, std::span<const std::string> keep) {
  std::unordered_set<std::string_view> wanted(keep.begin(), keep.end());
  std::vector<Eigen::Index> pos;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (wanted.count(from[i])) pos.push_back(static_cast<Eigen::Index>(i));
  }
  return pos;
}

NameList pick(const NameList& names, const std::vector<Eigen::Index>& pos) {
  NameList out;
  out.reserve(pos.size());
  for (auto p : pos) out.push_back(names[static_cast<std::size_t>(p)]);
  return out;
}

}  // namespace

TrialIndex::TrialIndex(NameList models, NameList segments, BoolGrid valid)
    : models_(std::move(models)), segments_(std::move(segments)), valid_(std::move(valid)) {
  check_unique(models_, "model");
  check_unique(segments_, "segment");
  check_shape(models_, segments_, valid_);
}

TrialKey::TrialKey(NameList models, NameList segments, LabelGrid labels)
    : models_(std::move(models)), segments_(std::move(segments)), labels_(std::move(labels)) {
  check_unique(models_, "model");
  check_unique(segments_, "segment");
  check_shape(models_, segments_, labels_);
}

std::size_t TrialKey::target_count() const {
  return static_cast<std::size_t>((labels_ == Label::Target).count());
}

std::size_t TrialKey::nontarget_count() const {
  return static_cast<std::size_t>((labels_ == Label::NonTarget).count());
}

TrialIndex TrialKey::to_index() const {
  return TrialIndex(models_, segments_, labels_ != Label::Ignored);
}

ScoreMatrix::ScoreMatrix(NameList models, NameList segments, BoolGrid valid, ScoreGrid scores)
    : models_(std::move(models)),
      segments_(std::move(segments)),
      valid_(std::move(valid)),
      scores_(std::move(scores)) {
  check_unique(models_, "model");
  check_unique(segments_, "segment");
  check_shape(models_, segments_, valid_);
  check_shape(models_, segments_, scores_);
  for (Eigen::Index i = 0; i < valid_.rows(); ++i) {
    for (Eigen::Index j = 0; j < valid_.cols(); ++j) {
      if (valid_(i, j) && !std::isfinite(scores_(i, j))) {
        throw InvariantError("non-finite score for trial (" + models_[static_cast<std::size_t>(i)] + ", " +
                             segments_[static_cast<std::size_t>(j)] + ")");
      }
    }
  }
}

QualityMeasures::QualityMeasures(NameList ids, Eigen::MatrixXd values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  check_unique(ids_, "quality id");
  if (values_.cols() != static_cast<Eigen::Index>(ids_.size())) {
    throw InvariantError("quality matrix has " + std::to_string(values_.cols()) + " columns for " +
                         std::to_string(ids_.size()) + " ids");
  }
  if (!values_.allFinite()) throw InvariantError("non-finite quality measure");
}

Eigen::Index QualityMeasures::find(const std::string& id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

LabeledScores::LabeledScores(std::initializer_list<double> t, std::initializer_list<double> n)
    : LabeledScores(std::span<const double>(t.begin(), t.size()), std::span<const double>(n.begin(), n.size())) {}

LabeledScores::LabeledScores(std::span<const double> t, std::span<const double> n)
    : tar(Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()))),
      non(Eigen::Map<const Eigen::VectorXd>(n.data(), static_cast<Eigen::Index>(n.size()))) {}

AlignedScores align_scores_to_key(const ScoreMatrix& scores, const TrialKey& key) {
  const NameMap model_pos = make_name_map(scores.model_names());
  const NameMap segment_pos = make_name_map(scores.segment_names());

  // Map key columns onto score columns once.
  std::vector<Eigen::Index> seg_map(key.segment_names().size(), -1);
  for (std::size_t j = 0; j < seg_map.size(); ++j) {
    if (auto it = segment_pos.find(key.segment_names()[j]); it != segment_pos.end()) seg_map[j] = it->second;
  }

  std::vector<double> tar;
  std::vector<double> non;
  std::size_t missing = 0;
  const auto& labels = key.labels();
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    const auto mit = model_pos.find(key.model_names()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      const Label lab = labels(i, j);
      if (lab == Label::Ignored) continue;
      const Eigen::Index sj = seg_map[static_cast<std::size_t>(j)];
      if (mit == model_pos.end() || sj < 0 || !scores.valid()(mit->second, sj)) {
        ++missing;
        continue;
      }
      const double s = scores.scores()(mit->second, sj);
      (lab == Label::Target ? tar : non).push_back(s);
    }
  }
  return {LabeledScores(std::span<const double>(tar), std::span<const double>(non)), missing};
}

ScoreMatrix merge_scores(const ScoreMatrix& a, const ScoreMatrix& b) {
  NameList models = a.model_names();
  NameList segments = a.segment_names();
  NameMap model_pos = make_name_map(models);
  NameMap segment_pos = make_name_map(segments);
  for (const auto& m : b.model_names()) {
    if (model_pos.emplace(m, static_cast<Eigen::Index>(models.size())).second) models.push_back(m);
  }
  for (const auto& s : b.segment_names()) {
    if (segment_pos.emplace(s, static_cast<Eigen::Index>(segments.size())).second) segments.push_back(s);
  }

  const auto rows = static_cast<Eigen::Index>(models.size());
  const auto cols = static_cast<Eigen::Index>(segments.size());
  BoolGrid valid = BoolGrid::Constant(rows, cols, false);
  ScoreGrid out = ScoreGrid::Zero(rows, cols);

  valid.topLeftCorner(a.valid().rows(), a.valid().cols()) = a.valid();
  out.topLeftCorner(a.scores().rows(), a.scores().cols()) = a.scores();
  // Keep invalid cells at 0.0 so merged objects compare and serialize cleanly.
  out = valid.select(out, 0.0);

  std::vector<Eigen::Index> bcol(b.segment_names().size());
  for (std::size_t j = 0; j < bcol.size(); ++j) bcol[j] = segment_pos.at(b.segment_names()[j]);
  for (Eigen::Index i = 0; i < b.valid().rows(); ++i) {
    const Eigen::Index r = model_pos.at(b.model_names()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < b.valid().cols(); ++j) {
      if (!b.valid()(i, j)) continue;
      const Eigen::Index c = bcol[static_cast<std::size_t>(j)];
      if (valid(r, c)) {
        throw OverlapError("both score objects provide a score for trial (" + models[static_cast<std::size_t>(r)] +
                           ", " + segments[static_cast<std::size_t>(c)] + ")");
      }
      valid(r, c) = true;
      out(r, c) = b.scores()(i, j);
    }
  }
  return ScoreMatrix(std::move(models), std::move(segments), std::move(valid), std::move(out));
}

ScoreMatrix filter_by_index(const ScoreMatrix& scores, const TrialIndex& index) {
  const auto rows = kept_positions(scores.model_names(), index.model_names());
  const auto cols = kept_positions(scores.segment_names(), index.segment_names());
  if (rows.empty() || cols.empty()) throw EmptySelection("score object and index share no trials");

  const NameMap idx_model = make_name_map(index.model_names());
  const NameMap idx_segment = make_name_map(index.segment_names());
  NameList models = pick(scores.model_names(), rows);
  NameList segments = pick(scores.segment_names(), cols);

  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  BoolGrid valid(nr, nc);
  ScoreGrid out(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const Eigen::Index si = rows[static_cast<std::size_t>(i)];
    const Eigen::Index ii = idx_model.at(models[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Eigen::Index sj = cols[static_cast<std::size_t>(j)];
      const Eigen::Index ij = idx_segment.at(segments[static_cast<std::size_t>(j)]);
      valid(i, j) = scores.valid()(si, sj) && index.valid()(ii, ij);
      out(i, j) = valid(i, j) ? scores.scores()(si, sj) : 0.0;
    }
  }
  return ScoreMatrix(std::move(models), std::move(segments), std::move(valid), std::move(out));
}

ScoreMatrix filter_by_name_lists(const ScoreMatrix& scores, std::span<const std::string> keep_models,
                                 std::span<const std::string> keep_segments) {
  const auto rows = kept_positions(scores.model_names(), keep_models);
  const auto cols = kept_positions(scores.segment_names(), keep_segments);
  if (rows.empty() || cols.empty()) throw EmptySelection("name lists select no trials");
  return ScoreMatrix(pick(scores.model_names(), rows), pick(scores.segment_names(), cols),
                     scores.valid()(rows, cols), scores.scores()(rows, cols));
}

TrialKey filter_by_name_lists(const TrialKey& key, std::span<const std::string> keep_models,
                              std::span<const std::string> keep_segments) {
  const auto rows = kept_positions(key.model_names(), keep_models);
  const auto cols = kept_positions(key.segment_names(), keep_segments);
  if (rows.empty() || cols.empty()) throw EmptySelection("name lists select no trials");
  return TrialKey(pick(key.model_names(), rows), pick(key.segment_names(), cols), key.labels()(rows, cols));
}

}  // namespace llrkit
