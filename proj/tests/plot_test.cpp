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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "llrkit/errors.hpp"
#include "llrkit/numeric.hpp"
#include "llrkit/plot.hpp"
#include "llrkit/synthetic.hpp"
#include "oracles.hpp"

namespace llrkit {
namespace {

using Vec = Eigen::VectorXd;
const LabeledScores kD1({1.0, 2.0}, {0.0, 1.5});
// probit(0.25) and probit(0.75), from scipy.stats.norm.ppf.
constexpr double kQ25 = -0.6744897501960817;
constexpr double kQ75 = 0.6744897501960817;

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST(DetWarp, ClampsToHalfCount) {
  EXPECT_NEAR(det_warp(0.0, 2), kQ25, 1e-14);
  EXPECT_NEAR(det_warp(1.0, 2), kQ75, 1e-14);
  EXPECT_EQ(det_warp(0.5, 2), 0.0);
  EXPECT_NEAR(det_warp(0.0, 1000), probit(0.0005), 1e-15);
  EXPECT_NEAR(det_warp(0.3, 1000), probit(0.3), 1e-15);
}

TEST(DetCurve, D1RocchVertices) {
  const DetCurve c = det_curve(kD1, DetStyle::Rocch);
  ASSERT_EQ(c.size(), 4);
  const std::vector<double> pm = {1, 0.5, 0, 0}, pf = {0, 0, 0.5, 1};
  const std::vector<double> y = {kQ75, 0, kQ25, kQ25}, x = {kQ25, kQ25, 0, kQ75};
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_EQ(c.p_miss(k), pm[std::size_t(k)]);
    EXPECT_EQ(c.p_fa(k), pf[std::size_t(k)]);
    EXPECT_NEAR(c.y(k), y[std::size_t(k)], 1e-14);
    EXPECT_NEAR(c.x(k), x[std::size_t(k)], 1e-14);
  }
  EXPECT_FALSE(c.dr30_miss);
  EXPECT_FALSE(c.dr30_fa);
}

TEST(DetCurve, SteppyHasOnePointPerDistinctThreshold) {
  const DetCurve s = det_curve(kD1, DetStyle::Steppy);
  EXPECT_EQ(s.size(), 5);
  const LabeledScores tied({1.0, 1.0, 2.0}, {1.0, 0.0});
  EXPECT_EQ(det_curve(tied, DetStyle::Steppy).size(), 4);
}

TEST(DetCurve, RocchLiesOnOrBelowSteppy) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, 60, 90, 1.0);
    const DetCurve h = det_curve(LabeledScores(t, n), DetStyle::Rocch);
    const DetCurve s = det_curve(LabeledScores(t, n), DetStyle::Steppy);
    // Every hull vertex is a steppy point.
    for (Eigen::Index k = 0; k < h.size(); ++k) {
      bool found = false;
      for (Eigen::Index j = 0; j < s.size() && !found; ++j) {
        found = h.p_miss(k) == s.p_miss(j) && h.p_fa(k) == s.p_fa(j);
      }
      EXPECT_TRUE(found);
    }
    for (Eigen::Index k = 1; k < h.size(); ++k) {
      EXPECT_LE(h.y(k), h.y(k - 1));
      EXPECT_GE(h.x(k), h.x(k - 1));
    }
  }
}

TEST(DetCurve, Dr30Markers) {
  const LabeledScores s = gaussian_scores(1000, 1000, 5);
  const DetCurve c = det_curve(s, DetStyle::Rocch);
  const RocchCurve h = rocch(s);
  ASSERT_TRUE(c.dr30_miss && c.dr30_fa);
  Eigen::Index km = -1, kf = -1;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    if (h.miss_count(k) >= 30) km = k;
    if (kf < 0 && h.fa_count(k) >= 30) kf = k;
  }
  EXPECT_EQ(c.dr30_miss->y, c.y(km));
  EXPECT_EQ(c.dr30_fa->x, c.x(kf));
}

TEST(Nber, DefaultSystemIsOneEverywhere) {
  const LabeledScores zero(Vec::Zero(10), Vec::Zero(20));
  const Vec grid = logit_grid(-10, 10, 401);
  const NberPlotData p = nber_curve(zero, grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(p.actual(i), 1.0, 1e-12) << grid(i);
    EXPECT_LE(p.minimum(i), 1.0 + 1e-12);
  }
}

TEST(Nber, SinglePointGridAndErrors) {
  const NberPlotData p = nber_curve(kD1, Vec::Constant(1, 0.0));
  EXPECT_EQ(p.size(), 1);
  EXPECT_DOUBLE_EQ(p.actual(0), 1.0);
  EXPECT_DOUBLE_EQ(p.minimum(0), 0.5);
  EXPECT_FALSE(nber_curve(kD1, Vec::Constant(1, 0.0), false).has_minimum());
  EXPECT_THROW(nber_curve(kD1, Vec()), InvalidArgument);
  EXPECT_THROW(nber_curve(kD1, (Vec(2) << 1, 0).finished()), InvalidArgument);
  EXPECT_THROW(nber_curve(kD1, Vec::Constant(1, std::nan(""))), InvalidArgument);
  EXPECT_THROW(nber_curve(LabeledScores(Vec(), Vec::Zero(1)), Vec::Zero(1)), DegenerateInput);
}

TEST(Nber, InvariantsOnRandomLlrs) {
  std::mt19937_64 rng(4);
  const Vec grid = logit_grid(-8, 8, 161);
  for (int rep = 0; rep < 20; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, 100, 150, 1.5);
    const LabeledScores s(t, n);
    const NberPlotData p = nber_curve(s, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(p.actual(i), p.miss_contrib(i) + p.fa_contrib(i), 1e-15);
      EXPECT_GE(p.actual(i), p.minimum(i) - 1e-12);
      EXPECT_LE(p.minimum(i), 1.0 + 1e-12);
      const double pt = 1 / (1 + std::exp(-grid(i)));
      const double want = oracle::min_bayes_error(t, n, pt) / std::min(pt, 1 - pt);
      EXPECT_NEAR(p.minimum(i), want, 1e-12);
      const auto r = oracle::rates_at(t, n, -grid(i));
      EXPECT_NEAR(p.actual(i), (pt * r.p_miss + (1 - pt) * r.p_fa) / std::min(pt, 1 - pt), 1e-12);
    }
  }
}

TEST(Csv, DetRoundTripAndRowCount) {
  const DetCurve c = det_curve(kD1, DetStyle::Steppy);
  std::string header;
  const auto rows = read_csv(emit_csv(c), &header);
  EXPECT_EQ(header, "p_miss,p_fa,probit_p_miss,probit_p_fa");
  ASSERT_EQ(rows.size(), std::size_t(c.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k][0], c.p_miss(Eigen::Index(k)));
    EXPECT_EQ(rows[k][1], c.p_fa(Eigen::Index(k)));
    EXPECT_EQ(rows[k][2], c.y(Eigen::Index(k)));
    EXPECT_EQ(rows[k][3], c.x(Eigen::Index(k)));
  }
}

TEST(Csv, NberColumns) {
  const Vec grid = logit_grid(-3, 3, 7);
  const NberPlotData p = nber_curve(kD1, grid);
  std::string header;
  auto rows = read_csv(emit_csv(p), &header);
  EXPECT_EQ(header, "x,actual,minimum,miss_contrib,fa_contrib");
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(rows[i][0], grid(Eigen::Index(i)));
    EXPECT_EQ(rows[i][1], p.actual(Eigen::Index(i)));
    EXPECT_EQ(rows[i][2], p.minimum(Eigen::Index(i)));
  }
  rows = read_csv(emit_csv(nber_curve(kD1, grid, false)), &header);
  EXPECT_EQ(header, "x,actual,miss_contrib,fa_contrib");
  EXPECT_EQ(rows[0].size(), 4u);
}

TEST(Svg, NberElements) {
  NberPlotData p = nber_curve(gaussian_scores(2000, 2000, 1), logit_grid(-10, 0));
  p.operating_points = {-2.2, -6.9};
  SvgOptions o;
  o.title = "a < b & c";
  const std::string svg = render_svg(std::vector<NberPlotData>{p}, o);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_EQ(count(svg, "<polyline"), 4u);
  EXPECT_EQ(count(svg, "class=\"default\""), 1u);
  EXPECT_EQ(count(svg, "class=\"opoint\""), 2u);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("a < b"), std::string::npos);
  const std::size_t markers = std::size_t(p.dr30.x_miss30.has_value()) + std::size_t(p.dr30.x_fa30.has_value());
  EXPECT_EQ(count(svg, "<polygon class=\"dr30\""), markers);
}

TEST(Svg, DetElements) {
  const LabeledScores s = gaussian_scores(500, 500, 2);
  const std::vector<DetCurve> curves = {det_curve(s, DetStyle::Rocch), det_curve(s, DetStyle::Steppy)};
  const std::string svg = render_svg(curves);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_EQ(count(svg, "det-rocch"), 1u);
  EXPECT_EQ(count(svg, "det-steppy"), 1u);
  EXPECT_EQ(count(svg, "<path class=\"dr30\""), 4u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace llrkit
