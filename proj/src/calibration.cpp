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

#include "llrkit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llrkit/errors.hpp"
#include "llrkit/numeric.hpp"
#include "llrkit/rocch.hpp"
#include "llrkit/score_io.hpp"

namespace llrkit {
namespace {

Eigen::Index triangle_size(Eigen::Index q) { return q * (q + 1) / 2; }

// Columns of the design matrix for the upper triangle of W: q_i r_i on the
// diagonal, q_i r_j + q_j r_i off it.
void fill_quality_features(const QualityPairs& qp, Eigen::Ref<Eigen::MatrixXd> out) {
  const Eigen::Index q = qp.dimension();
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    out.col(col++) = qp.q.col(i).cwiseProduct(qp.r.col(i));
    for (Eigen::Index j = i + 1; j < q; ++j) {
      out.col(col++) = qp.q.col(i).cwiseProduct(qp.r.col(j)) + qp.q.col(j).cwiseProduct(qp.r.col(i));
    }
  }
}

void check_quality_pairs(const QualityPairs& qp, Eigen::Index trials, const char* side) {
  if (qp.q.cols() != qp.r.cols()) throw DimensionMismatch("quality vectors q and r differ in dimension");
  if (qp.q.rows() != trials || qp.r.rows() != trials) {
    throw AlignmentError(std::string("quality vectors do not match the ") + side + " trial count");
  }
  if (!qp.q.allFinite() || !qp.r.allFinite()) throw InvalidArgument("non-finite quality measure");
}

Eigen::MatrixXd design(std::span<const LabeledScores> stack, bool targets, const QualityPairs* qp,
                       Eigen::Index dimension) {
  const Eigen::Index n = targets ? stack[0].tar.size() : stack[0].non.size();
  Eigen::MatrixXd x(n, dimension);
  x.col(0).setOnes();
  for (std::size_t i = 0; i < stack.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i) + 1) = targets ? stack[i].tar : stack[i].non;
  }
  if (qp) {
    const Eigen::Index first = 1 + static_cast<Eigen::Index>(stack.size());
    fill_quality_features(*qp, x.rightCols(dimension - first));
  }
  return x;
}

// sigma(z) (1 - sigma(z)), safe for large |z|.
double logistic_slope(double z) { return logistic(z) * logistic(-z); }

FusionFit fit(const WlrObjective& obj, const TrainingConfig& cfg) {
  const auto res = minimize(obj.oracle(), obj.initial_point(), cfg.optimizer);
  return {obj.unpack(res.w), res.f, res.termination, res.iterations};
}

}  // namespace

void FusionModel::validate() const {
  if (!std::isfinite(offset) || !weights.allFinite()) throw InvalidArgument("fusion model has non-finite parameters");
  if (quality_matrix) {
    const auto& w = *quality_matrix;
    if (w.rows() != w.cols()) throw DimensionMismatch("quality matrix must be square");
    if (!w.allFinite()) throw InvalidArgument("quality matrix has non-finite entries");
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("quality matrix must be symmetric");
  }
}

WlrObjective::WlrObjective(std::span<const LabeledScores> dev, const LabeledQuality* quality, double pi_tilde,
                           double ridge)
    : ridge_(ridge) {
  if (dev.empty()) throw DegenerateInput("fusion needs at least one system");
  if (!(pi_tilde > 0.0 && pi_tilde < 1.0)) throw InvalidArgument("training prior must lie strictly between 0 and 1");
  if (!(ridge >= 0.0)) throw InvalidArgument("ridge penalty must be nonnegative");
  const Eigen::Index t = dev[0].tar.size();
  const Eigen::Index n = dev[0].non.size();
  if (t == 0 || n == 0) throw DegenerateInput("training needs target and non-target scores");
  for (const auto& s : dev) {
    if (s.tar.size() != t || s.non.size() != n) throw AlignmentError("subsystem score lists differ in trial counts");
    if (!s.tar.allFinite() || !s.non.allFinite()) throw InvalidArgument("training scores must be finite");
  }
  if (quality) {
    check_quality_pairs(quality->tar, t, "target");
    check_quality_pairs(quality->non, n, "non-target");
    if (quality->tar.dimension() != quality->non.dimension()) {
      throw DimensionMismatch("target and non-target quality vectors differ in dimension");
    }
    quality_dim_ = quality->tar.dimension();
  }
  systems_ = static_cast<Eigen::Index>(dev.size());
  dimension_ = 1 + systems_ + triangle_size(quality_dim_);
  x_tar_ = design(dev, true, quality ? &quality->tar : nullptr, dimension_);
  x_non_ = design(dev, false, quality ? &quality->non : nullptr, dimension_);
  tar_weight_ = pi_tilde / (static_cast<double>(t) * ln2<double>());
  non_weight_ = (1.0 - pi_tilde) / (static_cast<double>(n) * ln2<double>());
  prior_logit_ = logit(pi_tilde);
}

double WlrObjective::value(const Eigen::VectorXd& theta) const { return value_and_gradient(theta, nullptr); }

double WlrObjective::value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  if (theta.size() != dimension_) throw DimensionMismatch("parameter vector has the wrong length");
  const Eigen::VectorXd lt = x_tar_ * theta;
  const Eigen::VectorXd ln = x_non_ * theta;

  double tar_sum = 0.0;
  double non_sum = 0.0;
  for (Eigen::Index i = 0; i < lt.size(); ++i) tar_sum += softplus(-lt(i) - prior_logit_);
  for (Eigen::Index i = 0; i < ln.size(); ++i) non_sum += softplus(ln(i) + prior_logit_);
  const double penalty = 0.5 * ridge_ * theta.tail(dimension_ - 1).squaredNorm();
  const double f = tar_weight_ * tar_sum + non_weight_ * non_sum + penalty;

  if (grad) {
    const Eigen::VectorXd dt = lt.unaryExpr([&](double l) { return -tar_weight_ * logistic(-l - prior_logit_); });
    const Eigen::VectorXd dn = ln.unaryExpr([&](double l) { return non_weight_ * logistic(l + prior_logit_); });
    *grad = x_tar_.transpose() * dt + x_non_.transpose() * dn;
    grad->tail(dimension_ - 1) += ridge_ * theta.tail(dimension_ - 1);
  }
  return f;
}

Eigen::VectorXd WlrObjective::curvature(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd c(x_tar_.rows() + x_non_.rows());
  c.head(x_tar_.rows()) =
      (x_tar_ * theta).unaryExpr([&](double l) { return tar_weight_ * logistic_slope(l + prior_logit_); });
  c.tail(x_non_.rows()) =
      (x_non_ * theta).unaryExpr([&](double l) { return non_weight_ * logistic_slope(l + prior_logit_); });
  return c;
}

Eigen::VectorXd WlrObjective::hessian_times(const Eigen::VectorXd& theta, const Eigen::VectorXd& v) const {
  return oracle().hessian_times(theta, v);
}

ObjectiveOracle<double> WlrObjective::oracle() const {
  ObjectiveOracle<double> o;
  o.dimension = dimension_;
  o.value_and_gradient = [this](const Eigen::VectorXd& w, Eigen::VectorXd* g) { return value_and_gradient(w, g); };
  o.hessian_at = [this](const Eigen::VectorXd& w) -> ObjectiveOracle<double>::HessianOperator {
    if (w.size() != dimension_) throw DimensionMismatch("parameter vector has the wrong length");
    Eigen::VectorXd c = curvature(w);
    return [this, c = std::move(c)](const Eigen::VectorXd& v) {
      const Eigen::Index t = x_tar_.rows();
      Eigen::VectorXd hv = x_tar_.transpose() * c.head(t).cwiseProduct(x_tar_ * v) +
                           x_non_.transpose() * c.tail(x_non_.rows()).cwiseProduct(x_non_ * v);
      hv.tail(dimension_ - 1) += ridge_ * v.tail(dimension_ - 1);
      return hv;
    };
  };
  return o;
}

Eigen::VectorXd WlrObjective::pack(const FusionModel& model) const {
  if (model.system_count() != systems_ || model.quality_dimension() != quality_dim_) {
    throw DimensionMismatch("fusion model does not match the objective's systems or quality dimension");
  }
  Eigen::VectorXd theta(dimension_);
  theta(0) = model.offset;
  theta.segment(1, systems_) = model.weights;
  Eigen::Index k = 1 + systems_;
  for (Eigen::Index i = 0; i < quality_dim_; ++i) {
    for (Eigen::Index j = i; j < quality_dim_; ++j) theta(k++) = (*model.quality_matrix)(i, j);
  }
  return theta;
}

FusionModel WlrObjective::unpack(const Eigen::VectorXd& theta) const {
  if (theta.size() != dimension_) throw DimensionMismatch("parameter vector has the wrong length");
  FusionModel m;
  m.offset = theta(0);
  m.weights = theta.segment(1, systems_);
  if (quality_dim_ > 0) {
    Eigen::MatrixXd w(quality_dim_, quality_dim_);
    Eigen::Index k = 1 + systems_;
    for (Eigen::Index i = 0; i < quality_dim_; ++i) {
      for (Eigen::Index j = i; j < quality_dim_; ++j) w(i, j) = w(j, i) = theta(k++);
    }
    m.quality_matrix = std::move(w);
  }
  return m;
}

Eigen::VectorXd WlrObjective::initial_point() const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dimension_);
  theta.segment(1, systems_).setConstant(1.0 / static_cast<double>(systems_));
  return theta;
}

FusionFit train_calibration(const LabeledScores& dev, const TrainingConfig& cfg) {
  if (dev.tar.size() < 2 || dev.non.size() < 2) {
    throw DegenerateInput("calibration needs at least two target and two non-target scores");
  }
  return fit(WlrObjective(std::span<const LabeledScores>(&dev, 1), nullptr, cfg.pi_tilde, cfg.ridge), cfg);
}

FusionFit train_fusion(std::span<const LabeledScores> dev_stack, const TrainingConfig& cfg) {
  return fit(WlrObjective(dev_stack, nullptr, cfg.pi_tilde, cfg.ridge), cfg);
}

FusionFit train_quality_fusion(std::span<const LabeledScores> dev_stack, const LabeledQuality& quality,
                               const TrainingConfig& cfg) {
  return fit(WlrObjective(dev_stack, &quality, cfg.pi_tilde, cfg.ridge), cfg);
}

Eigen::VectorXd apply_fusion(const FusionModel& model, const Eigen::MatrixXd& scores, const QualityPairs* quality) {
  if (scores.cols() != model.system_count()) {
    throw DimensionMismatch("score stack has " + std::to_string(scores.cols()) + " systems, model expects " +
                            std::to_string(model.system_count()));
  }
  Eigen::VectorXd llr = (scores * model.weights).array() + model.offset;
  if (model.quality_matrix.has_value() != (quality != nullptr)) {
    throw DimensionMismatch(model.quality_matrix ? "model needs quality measures" : "model takes no quality measures");
  }
  if (quality) {
    if (quality->dimension() != model.quality_dimension() || quality->r.cols() != quality->q.cols()) {
      throw DimensionMismatch("quality vectors do not match the model's quality dimension");
    }
    if (quality->trials() != scores.rows() || quality->r.rows() != scores.rows()) {
      throw DimensionMismatch("quality vectors do not match the trial count");
    }
    llr += ((quality->q * *model.quality_matrix).array() * quality->r.array()).rowwise().sum().matrix();
  }
  return llr;
}

Eigen::VectorXd apply_fusion(const FusionModel& model, const Eigen::VectorXd& scores) {
  return apply_fusion(model, Eigen::MatrixXd(scores), nullptr);
}

LabeledScores apply_fusion(const FusionModel& model, std::span<const LabeledScores> stack,
                           const LabeledQuality* quality) {
  if (static_cast<Eigen::Index>(stack.size()) != model.system_count()) {
    throw DimensionMismatch("score stack does not match the model's system count");
  }
  if (stack.empty()) return {};
  auto gather = [&](bool targets) {
    const Eigen::Index n = targets ? stack[0].tar.size() : stack[0].non.size();
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(stack.size()));
    for (std::size_t i = 0; i < stack.size(); ++i) {
      const Eigen::VectorXd& col = targets ? stack[i].tar : stack[i].non;
      if (col.size() != n) throw AlignmentError("subsystem score lists differ in trial counts");
      m.col(static_cast<Eigen::Index>(i)) = col;
    }
    return m;
  };
  return LabeledScores(apply_fusion(model, gather(true), quality ? &quality->tar : nullptr),
                       apply_fusion(model, gather(false), quality ? &quality->non : nullptr));
}

void PavCalibrationMap::validate() const {
  if (knot_scores.size() == 0 || knot_scores.size() != knot_llrs.size()) {
    throw InvalidArgument("PAV map needs matching, non-empty knot lists");
  }
  for (Eigen::Index k = 1; k < knot_scores.size(); ++k) {
    if (!(knot_scores(k) > knot_scores(k - 1))) throw InvalidArgument("PAV knot scores must be strictly increasing");
    if (!(knot_llrs(k) >= knot_llrs(k - 1))) throw InvalidArgument("PAV knot LLRs must be nondecreasing");
  }
  if (!knot_scores.allFinite() || !knot_llrs.allFinite()) throw InvalidArgument("PAV knots must be finite");
}

PavCalibrationMap train_pav_calibration(const LabeledScores& dev, const TrainingConfig& cfg) {
  if (!(cfg.llr_clip > 0.0) || !std::isfinite(cfg.llr_clip)) throw InvalidArgument("LLR clip must be positive");
  const ScoreBlocks blocks = pav_score_blocks(dev);
  const Eigen::VectorXd llr = block_llrs(blocks).cwiseMax(-cfg.llr_clip).cwiseMin(cfg.llr_clip);

  std::vector<double> scores;
  std::vector<double> llrs;
  for (Eigen::Index b = 0; b < blocks.size(); ++b) {
    scores.push_back(blocks.score_lo(b));
    llrs.push_back(llr(b));
    if (blocks.score_hi(b) > blocks.score_lo(b)) {
      scores.push_back(blocks.score_hi(b));
      llrs.push_back(llr(b));
    }
  }
  PavCalibrationMap map;
  map.knot_scores = Eigen::Map<Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
  map.knot_llrs = Eigen::Map<Eigen::VectorXd>(llrs.data(), static_cast<Eigen::Index>(llrs.size()));
  map.llr_clip = cfg.llr_clip;
  return map;
}

double apply_pav_calibration(const PavCalibrationMap& map, double score) {
  const Eigen::VectorXd& s = map.knot_scores;
  const Eigen::VectorXd& l = map.knot_llrs;
  const Eigen::Index last = s.size() - 1;
  if (score <= s(0)) return l(0);
  if (score >= s(last)) return l(last);
  // First knot strictly above the score; the score lies in [s(k-1), s(k)).
  const Eigen::Index k = std::upper_bound(s.data(), s.data() + s.size(), score) - s.data();
  const double lo = l(k - 1);
  const double hi = l(k);
  if (lo == hi) return lo;
  const double t = (score - s(k - 1)) / (s(k) - s(k - 1));
  return lo + t * (hi - lo);
}

Eigen::VectorXd apply_pav_calibration(const PavCalibrationMap& map, const Eigen::VectorXd& scores) {
  return scores.unaryExpr([&](double s) { return apply_pav_calibration(map, s); });
}

LabeledScores apply_pav_calibration(const PavCalibrationMap& map, const LabeledScores& scores) {
  return LabeledScores(apply_pav_calibration(map, scores.tar), apply_pav_calibration(map, scores.non));
}

namespace {

constexpr std::string_view kModelHeader = "llrkit-model";
constexpr int kModelVersion = 1;

void put_vector(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += ' ';
    append_real(out, v(i));
  }
}

class ModelReader {
 public:
  explicit ModelReader(std::string_view text) : in_(std::string(text)) {}

  std::string keyword(std::string_view expected) {
    std::string w;
    if (!(in_ >> w) || (!expected.empty() && w != expected)) {
      throw FormatError("model file: expected '" + std::string(expected) + "'" + (w.empty() ? "" : ", got '" + w + "'"));
    }
    return w;
  }
  double real() {
    std::string w;
    double v = 0.0;
    if (!(in_ >> w) || !parse_real(w, v)) throw FormatError("model file: bad number '" + w + "'");
    return v;
  }
  Eigen::Index count() {
    const double v = real();
    if (v < 0 || v != std::floor(v) || v > 1e9) throw FormatError("model file: bad count");
    return static_cast<Eigen::Index>(v);
  }
  Eigen::VectorXd vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = real();
    return v;
  }
  bool at_end() {
    in_ >> std::ws;
    return in_.eof();
  }
  void finish() {
    std::string w;
    if (in_ >> w) throw FormatError("model file: unexpected trailing '" + w + "'");
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::string serialize_model(const CalibrationModel& model) {
  std::string out(kModelHeader);
  out += ' ';
  out += std::to_string(kModelVersion);
  out += '\n';
  if (const auto* f = std::get_if<FusionModel>(&model)) {
    f->validate();
    out += "type linear\noffset ";
    append_real(out, f->offset);
    out += "\nweights " + std::to_string(f->weights.size());
    put_vector(out, f->weights);
    out += '\n';
    if (f->quality_matrix) {
      const Eigen::MatrixXd& w = *f->quality_matrix;
      out += "quality " + std::to_string(w.rows());
      for (Eigen::Index i = 0; i < w.rows(); ++i) put_vector(out, w.row(i).transpose());
      out += '\n';
    }
  } else {
    const auto& p = std::get<PavCalibrationMap>(model);
    p.validate();
    out += "type pav\nllr_clip ";
    append_real(out, p.llr_clip);
    out += "\nknots " + std::to_string(p.knot_scores.size()) + '\n';
    for (Eigen::Index k = 0; k < p.knot_scores.size(); ++k) {
      append_real(out, p.knot_scores(k));
      out += ' ';
      append_real(out, p.knot_llrs(k));
      out += '\n';
    }
  }
  return out;
}

CalibrationModel parse_model(std::string_view text) {
  ModelReader r(text);
  r.keyword(kModelHeader);
  if (r.count() != kModelVersion) throw FormatError("model file: unsupported version");
  r.keyword("type");
  const std::string type = r.keyword("");
  if (type == "linear") {
    FusionModel m;
    r.keyword("offset");
    m.offset = r.real();
    r.keyword("weights");
    m.weights = r.vector(r.count());
    if (!r.at_end()) {
      r.keyword("quality");
      const Eigen::Index q = r.count();
      Eigen::MatrixXd w(q, q);
      for (Eigen::Index i = 0; i < q; ++i) w.row(i) = r.vector(q).transpose();
      m.quality_matrix = std::move(w);
    }
    r.finish();
    try {
      m.validate();
    } catch (const Error& e) {
      throw FormatError(std::string("model file: ") + e.what());
    }
    return m;
  }
  if (type == "pav") {
    PavCalibrationMap p;
    r.keyword("llr_clip");
    p.llr_clip = r.real();
    r.keyword("knots");
    const Eigen::Index k = r.count();
    p.knot_scores.resize(k);
    p.knot_llrs.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      p.knot_scores(i) = r.real();
      p.knot_llrs(i) = r.real();
    }
    r.finish();
    try {
      p.validate();
    } catch (const Error& e) {
      throw FormatError(std::string("model file: ") + e.what());
    }
    return p;
  }
  throw FormatError("model file: unknown type '" + type + "'");
}

}  // namespace llrkit
