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

// Plot data for DET curves and normalized Bayes error-rate curves, and their
// CSV and SVG renderings.

#ifndef LLRKIT_PLOT_HPP
#define LLRKIT_PLOT_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/metrics.hpp"
#include "llrkit/trial_data.hpp"

namespace llrkit {

enum class DetStyle { Steppy, Rocch };

struct DetPoint {
  double x = 0.0;  // probit(p_fa)
  double y = 0.0;  // probit(p_miss)
};

struct DetCurve {
  DetStyle style = DetStyle::Rocch;
  /// Unwarped rates, in hull orientation (p_miss falling, p_fa rising).
  Eigen::VectorXd p_miss;
  Eigen::VectorXd p_fa;
  /// Warped coordinates.
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  /// Warped hull vertex where the rule of 30 starts to hold for misses and
  /// for false alarms.
  std::optional<DetPoint> dr30_miss;
  std::optional<DetPoint> dr30_fa;
  std::string label;

  Eigen::Index size() const { return x.size(); }
};

/// probit(p) after clamping p to [1/(2n), 1 - 1/(2n)].
double det_warp(double p, std::int64_t n);

DetCurve det_curve(const LabeledScores& scores, DetStyle style);

struct NberPlotData {
  Eigen::VectorXd x_grid;
  Eigen::VectorXd actual;
  /// Empty unless requested.
  Eigen::VectorXd minimum;
  Eigen::VectorXd miss_contrib;
  Eigen::VectorXd fa_contrib;
  Dr30Markers dr30;
  /// Abscissae of dashed vertical operating-point lines.
  std::vector<double> operating_points;
  std::string label;

  Eigen::Index size() const { return x_grid.size(); }
  bool has_minimum() const { return minimum.size() == x_grid.size() && x_grid.size() > 0; }
};

NberPlotData nber_curve(const LabeledScores& llrs, const Eigen::VectorXd& x_grid, bool include_min = true);

struct SvgOptions {
  int width = 640;
  int height = 480;
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Cycled over curves.
  std::vector<std::string> colors = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  /// DET axis limits, as probabilities.
  double det_min_p = 1e-4;
  double det_max_p = 0.5;
  /// Vertical range of normalized Bayes error plots.
  double nber_y_max = 1.2;
};

std::string render_svg(const std::vector<DetCurve>& curves, const SvgOptions& opts = {});
/// Each series contributes its actual, minimum (if present), miss and false
/// alarm curves.  A black reference line at 1 marks the default system.
std::string render_svg(const std::vector<NberPlotData>& plots, const SvgOptions& opts = {});

/// Columns: p_miss, p_fa, probit_p_miss, probit_p_fa.
std::string emit_csv(const DetCurve& curve);
/// Columns: x, actual, [minimum,] miss_contrib, fa_contrib.
std::string emit_csv(const NberPlotData& plot);

}  // namespace llrkit

#endif  // LLRKIT_PLOT_HPP
