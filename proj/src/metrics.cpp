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

#include "llrkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "llrkit/errors.hpp"
#include "llrkit/numeric.hpp"

namespace llrkit {
namespace {

void require_both_classes(const LabeledScores& s, const char* what) {
  if (s.tar.size() == 0 || s.non.size() == 0) {
    throw DegenerateInput(std::string(what) + " needs at least one target and one non-target score");
  }
}

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(std::string(what) + " must lie strictly between 0 and 1");
}

ErrorRates make_rates(std::int64_t misses, std::int64_t fas, const LabeledScores& s) {
  return {static_cast<double>(misses) / static_cast<double>(s.tar.size()),
          static_cast<double>(fas) / static_cast<double>(s.non.size()), misses, fas};
}

}  // namespace

OperatingPoint OperatingPoint::from_prior(double pi_tilde) {
  require_probability(pi_tilde, "effective prior");
  return OperatingPoint(logit(pi_tilde));
}

double OperatingPoint::pi_tilde() const { return logistic(x_); }

void CostParams::validate() const {
  require_probability(prior, "prior");
  if (!(c_miss > 0.0) || !(c_fa > 0.0) || !std::isfinite(c_miss) || !std::isfinite(c_fa)) {
    throw InvalidArgument("costs must be positive and finite");
  }
}

double effective_prior(const CostParams& c) {
  c.validate();
  const double num = c.prior * c.c_miss;
  return num / (num + (1.0 - c.prior) * c.c_fa);
}

double bayes_threshold(double pi_tilde) {
  require_probability(pi_tilde, "effective prior");
  return -logit(pi_tilde);
}

double default_bayes_error(double pi_tilde) { return std::min(pi_tilde, 1.0 - pi_tilde); }

ErrorRates error_rates_at(const LabeledScores& scores, double eta) {
  require_both_classes(scores, "error rates");
  const auto misses = static_cast<std::int64_t>((scores.tar.array() < eta).count());
  const auto fas = static_cast<std::int64_t>((scores.non.array() >= eta).count());
  return make_rates(misses, fas, scores);
}

std::vector<ErrorRates> fast_error_rate_sweep(const LabeledScores& scores, std::span<const double> thresholds) {
  require_both_classes(scores, "error-rate sweep");
  if (thresholds.empty()) throw InvalidArgument("error-rate sweep needs at least one threshold");
  for (double t : thresholds) {
    if (std::isnan(t)) throw InvalidArgument("error-rate sweep: NaN threshold");
  }

  std::vector<double> tar(scores.tar.begin(), scores.tar.end());
  std::vector<double> non(scores.non.begin(), scores.non.end());
  std::sort(tar.begin(), tar.end());
  std::sort(non.begin(), non.end());
  std::vector<std::size_t> order(thresholds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return thresholds[a] < thresholds[b]; });

  // Position of each threshold among the sorted targets and non-targets:
  // the number of scores strictly below it.
  std::vector<ErrorRates> out(thresholds.size());
  std::size_t below_t = 0;
  std::size_t below_n = 0;
  for (std::size_t k : order) {
    const double eta = thresholds[k];
    while (below_t < tar.size() && tar[below_t] < eta) ++below_t;
    while (below_n < non.size() && non[below_n] < eta) ++below_n;
    out[k] = make_rates(static_cast<std::int64_t>(below_t), static_cast<std::int64_t>(non.size() - below_n), scores);
  }
  return out;
}

BayesError actual_bayes_error(const LabeledScores& llrs, double pi_tilde) {
  const ErrorRates r = error_rates_at(llrs, bayes_threshold(pi_tilde));
  const double raw = pi_tilde * r.p_miss + (1.0 - pi_tilde) * r.p_fa;
  return {raw, raw / default_bayes_error(pi_tilde)};
}

MinBayesError min_bayes_error(const RocchCurve& curve, double pi_tilde) {
  require_probability(pi_tilde, "effective prior");
  if (curve.size() == 0) throw DegenerateInput("min Bayes error: empty hull");
  // First minimum: vertices run in order of increasing false alarms.
  Eigen::Index best = 0;
  double raw = pi_tilde * curve.p_miss(0) + (1.0 - pi_tilde) * curve.p_fa(0);
  for (Eigen::Index k = 1; k < curve.size(); ++k) {
    const double cost = pi_tilde * curve.p_miss(k) + (1.0 - pi_tilde) * curve.p_fa(k);
    if (cost < raw) {
      raw = cost;
      best = k;
    }
  }
  return {raw,
          raw / default_bayes_error(pi_tilde),
          curve.miss_count(best),
          curve.fa_count(best),
          curve.p_miss(best),
          curve.p_fa(best)};
}

MinBayesError min_bayes_error(const LabeledScores& scores, double pi_tilde) {
  require_probability(pi_tilde, "effective prior");
  return min_bayes_error(rocch(scores), pi_tilde);
}

double actual_dcf(const LabeledScores& llrs, const CostParams& c) {
  c.validate();
  const double eta = std::log(c.c_fa / c.c_miss) - logit(c.prior);
  const ErrorRates r = error_rates_at(llrs, eta);
  return c.prior * c.c_miss * r.p_miss + (1.0 - c.prior) * c.c_fa * r.p_fa;
}

double min_dcf(const LabeledScores& scores, const CostParams& c) {
  const double scale = c.prior * c.c_miss + (1.0 - c.prior) * c.c_fa;
  return scale * min_bayes_error(scores, effective_prior(c)).raw;
}

double cllr(const LabeledScores& llrs) {
  require_both_classes(llrs, "Cllr");
  // Per-term conversion to bits keeps the all-zero system at exactly 1.
  const double bits = 1.0 / ln2<double>();
  double tar_sum = 0.0;
  for (double l : llrs.tar) tar_sum += softplus(-l) * bits;
  double non_sum = 0.0;
  for (double l : llrs.non) non_sum += softplus(l) * bits;
  const double t = static_cast<double>(llrs.tar.size());
  const double n = static_cast<double>(llrs.non.size());
  return 0.5 * (tar_sum / t) + 0.5 * (non_sum / n);
}

double min_cllr(const LabeledScores& scores) { return cllr(pav_llrs(scores)); }

Eigen::VectorXd logit_grid(double x_min, double x_max, Eigen::Index points) {
  if (points < 1) throw InvalidArgument("grid needs at least one point");
  if (!(x_min <= x_max)) throw InvalidArgument("grid bounds out of order");
  if (points == 1) return Eigen::VectorXd::Constant(1, x_min);
  return Eigen::VectorXd::LinSpaced(points, x_min, x_max);
}

Dr30Markers dr30_markers(const RocchCurve& curve, std::span<const double> x_grid) {
  Dr30Markers m;
  for (double x : x_grid) {
    const MinBayesError e = min_bayes_error(curve, logistic(x));
    if (!m.x_fa30 && e.fa_count >= kRuleOfThirty) m.x_fa30 = x;
    if (e.miss_count >= kRuleOfThirty) m.x_miss30 = x;
  }
  return m;
}

Dr30Markers dr30_markers(const LabeledScores& scores, std::span<const double> x_grid) {
  return dr30_markers(rocch(scores), x_grid);
}

}  // namespace llrkit
