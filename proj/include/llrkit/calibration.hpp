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

// Score calibration and fusion.
//
// Parametric mappings have the form
//
//   llr_t = a + sum_i b_i s_it + q_t' W r_t
//
// with W symmetric, and are trained by minimizing a prior-weighted logistic
// regression (cross-entropy) objective with the trust-region optimizer.
// The non-parametric mapping is PAV, applied to unseen scores by linear
// interpolation between training blocks.

#ifndef LLRKIT_CALIBRATION_HPP
#define LLRKIT_CALIBRATION_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/trial_data.hpp"
#include "llrkit/trust_region.hpp"

namespace llrkit {

struct FusionModel {
  double offset = 0.0;
  Eigen::VectorXd weights;
  /// Symmetric quality combination matrix, when quality measures are fused.
  std::optional<Eigen::MatrixXd> quality_matrix;

  Eigen::Index system_count() const { return weights.size(); }
  Eigen::Index quality_dimension() const { return quality_matrix ? quality_matrix->rows() : 0; }
  void validate() const;
};

/// Per-trial quality vectors from the two sides of a trial, one row per
/// trial: q from the model side, r from the segment side.
struct QualityPairs {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;

  Eigen::Index trials() const { return q.rows(); }
  Eigen::Index dimension() const { return q.cols(); }
};

struct LabeledQuality {
  QualityPairs tar;
  QualityPairs non;
};

struct TrainingConfig {
  /// Effective prior weighting the two classes in the objective.
  double pi_tilde = 0.5;
  /// Bound applied to PAV calibration outputs, in nats.
  double llr_clip = 200.0;
  /// Ridge penalty on the weights and W (not the offset).
  double ridge = 0.0;
  TrOptions<double> optimizer;
};

/// Prior-weighted cross-entropy of a fusion model on supervised data, in
/// bits.  At pi~ = 0.5 with the identity mapping it equals Cllr.
///
/// Parameters are packed as [a, b_1..b_n, upper triangle of W row by row].
class WlrObjective {
 public:
  WlrObjective(std::span<const LabeledScores> dev, const LabeledQuality* quality, double pi_tilde,
               double ridge = 0.0);

  Eigen::Index dimension() const { return dimension_; }
  Eigen::Index system_count() const { return systems_; }
  Eigen::Index quality_dimension() const { return quality_dim_; }

  double value(const Eigen::VectorXd& theta) const;
  double value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const;
  Eigen::VectorXd hessian_times(const Eigen::VectorXd& theta, const Eigen::VectorXd& v) const;
  ObjectiveOracle<double> oracle() const;

  Eigen::VectorXd pack(const FusionModel& model) const;
  FusionModel unpack(const Eigen::VectorXd& theta) const;

  /// a = 0, b = 1/n each, W = 0.
  Eigen::VectorXd initial_point() const;

 private:
  // Per-trial curvature weights at theta, target block then non-target block.
  Eigen::VectorXd curvature(const Eigen::VectorXd& theta) const;

  Eigen::Index systems_ = 0;
  Eigen::Index quality_dim_ = 0;
  Eigen::Index dimension_ = 0;
  Eigen::MatrixXd x_tar_;
  Eigen::MatrixXd x_non_;
  double tar_weight_ = 0.0;
  double non_weight_ = 0.0;
  double prior_logit_ = 0.0;
  double ridge_ = 0.0;
};

struct FusionFit {
  FusionModel model;
  /// Objective value at the returned model, in bits.
  double objective = 0.0;
  TrTermination termination = TrTermination::Converged;
  int iterations = 0;
};

FusionFit train_calibration(const LabeledScores& dev, const TrainingConfig& cfg = {});
FusionFit train_fusion(std::span<const LabeledScores> dev_stack, const TrainingConfig& cfg = {});
FusionFit train_quality_fusion(std::span<const LabeledScores> dev_stack, const LabeledQuality& quality,
                               const TrainingConfig& cfg = {});

/// `scores` holds one row per trial and one column per system.
Eigen::VectorXd apply_fusion(const FusionModel& model, const Eigen::MatrixXd& scores,
                             const QualityPairs* quality = nullptr);
Eigen::VectorXd apply_fusion(const FusionModel& model, const Eigen::VectorXd& scores);
/// Applies the model to a labeled stack, keeping the target/non-target split.
LabeledScores apply_fusion(const FusionModel& model, std::span<const LabeledScores> stack,
                           const LabeledQuality* quality = nullptr);

/// Nondecreasing piecewise-linear score-to-LLR map.  Each training block
/// contributes knots at its lowest and highest score carrying the block LLR.
struct PavCalibrationMap {
  Eigen::VectorXd knot_scores;
  Eigen::VectorXd knot_llrs;
  double llr_clip = 200.0;

  void validate() const;
};

PavCalibrationMap train_pav_calibration(const LabeledScores& dev, const TrainingConfig& cfg = {});
double apply_pav_calibration(const PavCalibrationMap& map, double score);
Eigen::VectorXd apply_pav_calibration(const PavCalibrationMap& map, const Eigen::VectorXd& scores);
LabeledScores apply_pav_calibration(const PavCalibrationMap& map, const LabeledScores& scores);

using CalibrationModel = std::variant<FusionModel, PavCalibrationMap>;

/// Versioned key/value text with 17 significant digits.
std::string serialize_model(const CalibrationModel& model);
CalibrationModel parse_model(std::string_view text);

}  // namespace llrkit

#endif  // LLRKIT_CALIBRATION_HPP
