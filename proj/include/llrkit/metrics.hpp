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

// Detection metrics: Bayes thresholds, actual and minimum DCF, Bayes error
// rates, Cllr, and rule-of-30 markers.
//
// Every function shares one decision rule: accept iff llr >= eta.  A miss is a
// target with llr < eta, a false alarm a non-target with llr >= eta.

#ifndef LLRKIT_METRICS_HPP
#define LLRKIT_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/rocch.hpp"
#include "llrkit/trial_data.hpp"

namespace llrkit {

/// Effective prior pi~, stored through its log odds x = logit(pi~).
class OperatingPoint {
 public:
  static OperatingPoint from_prior(double pi_tilde);
  static OperatingPoint from_logit(double x) { return OperatingPoint(x); }

  double pi_tilde() const;
  double x() const { return x_; }
  /// Bayes threshold eta = -logit(pi~).
  double eta() const { return -x_; }

 private:
  explicit OperatingPoint(double x) : x_(x) {}
  double x_;
};

struct CostParams {
  double prior = 0.5;
  double c_miss = 1.0;
  double c_fa = 1.0;

  /// Throws InvalidArgument unless 0 < prior < 1 and both costs are positive.
  void validate() const;
};

struct ErrorRates {
  double p_miss = 0.0;
  double p_fa = 0.0;
  std::int64_t miss_count = 0;
  std::int64_t fa_count = 0;
};

struct BayesError {
  double raw = 0.0;
  double normalized = 0.0;
};

struct MinBayesError {
  double raw = 0.0;
  double normalized = 0.0;
  std::int64_t miss_count = 0;
  std::int64_t fa_count = 0;
  double p_miss = 0.0;
  double p_fa = 0.0;
};

/// pi C_miss / (pi C_miss + (1 - pi) C_fa).
double effective_prior(const CostParams& c);

/// eta = -logit(pi~).
double bayes_threshold(double pi_tilde);

/// Error rate of the default (always llr = 0) system: min(pi~, 1 - pi~).
double default_bayes_error(double pi_tilde);

ErrorRates error_rates_at(const LabeledScores& scores, double eta);

/// Error rates at many thresholds from one sorted pass over the scores.
/// Identical, threshold by threshold, to error_rates_at.
std::vector<ErrorRates> fast_error_rate_sweep(const LabeledScores& scores, std::span<const double> thresholds);

/// Empirical Bayes error of LLRs at the Bayes threshold of pi~, and its ratio
/// to the default-system error.
BayesError actual_bayes_error(const LabeledScores& llrs, double pi_tilde);

/// Minimum over thresholds, evaluated on the hull vertices.  Ties between
/// vertices go to the one with fewer false alarms.
MinBayesError min_bayes_error(const RocchCurve& curve, double pi_tilde);
MinBayesError min_bayes_error(const LabeledScores& scores, double pi_tilde);

/// Actual DCF of LLRs thresholded at log(C_fa / C_miss) - logit(prior).
double actual_dcf(const LabeledScores& llrs, const CostParams& c);
double min_dcf(const LabeledScores& scores, const CostParams& c);

/// Cllr in bits.  Infinite LLRs of the right sign cost nothing, of the wrong
/// sign +inf.
double cllr(const LabeledScores& llrs);
/// Cllr after optimal monotone (PAV) recalibration.
double min_cllr(const LabeledScores& scores);

/// Points of a grid uniform in x = logit(pi~).
Eigen::VectorXd logit_grid(double x_min, double x_max, Eigen::Index points = 501);

struct Dr30Markers {
  /// Rightmost grid point with at least 30 misses at the optimal vertex.
  std::optional<double> x_miss30;
  /// Leftmost grid point with at least 30 false alarms at the optimal vertex.
  std::optional<double> x_fa30;
};

inline constexpr std::int64_t kRuleOfThirty = 30;

Dr30Markers dr30_markers(const LabeledScores& scores, std::span<const double> x_grid);
Dr30Markers dr30_markers(const RocchCurve& curve, std::span<const double> x_grid);

}  // namespace llrkit

#endif  // LLRKIT_METRICS_HPP
