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

#include <gtest/gtest.h>

#include "llrkit/errors.hpp"
#include "llrkit/metrics.hpp"
#include "llrkit/rocch.hpp"
#include "oracles.hpp"

namespace llrkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const LabeledScores kD1({1.0, 2.0}, {0.0, 1.5});

std::vector<std::pair<double, double>> vertices(const RocchCurve& c) {
  std::vector<std::pair<double, double>> v;
  for (Eigen::Index k = 0; k < c.size(); ++k) v.emplace_back(c.p_miss(k), c.p_fa(k));
  return v;
}

LabeledScores from(const std::vector<double>& t, const std::vector<double>& n) { return LabeledScores(t, n); }

TEST(Rocch, D1Hull) {
  const RocchCurve c = rocch(kD1);
  EXPECT_EQ(vertices(c), (std::vector<std::pair<double, double>>{{1, 0}, {0.5, 0}, {0, 0.5}, {0, 1}}));
  EXPECT_EQ(c.miss_count(1), 1);
  EXPECT_EQ(c.fa_count(2), 1);
}

TEST(Rocch, PerfectSeparation) {
  const RocchCurve c = rocch(LabeledScores({3.0, 4.0, 5.0}, {0.0, 1.0}));
  EXPECT_EQ(vertices(c), (std::vector<std::pair<double, double>>{{1, 0}, {0, 0}, {0, 1}}));
  EXPECT_EQ(rocch_eer(c), 0.0);
  EXPECT_EQ(prbep(LabeledScores({3.0, 4.0, 5.0}, {0.0, 1.0})), 0.0);
}

TEST(Rocch, TiedSingleScores) {
  const RocchCurve c = rocch(LabeledScores({0.0}, {0.0}));
  EXPECT_EQ(vertices(c), (std::vector<std::pair<double, double>>{{1, 0}, {0, 1}}));
  EXPECT_EQ(rocch_eer(c), 0.5);
}

TEST(Rocch, DegenerateInput) {
  EXPECT_THROW(rocch(LabeledScores({1.0}, {})), DegenerateInput);
  EXPECT_THROW(rocch(LabeledScores({}, {1.0})), DegenerateInput);
  EXPECT_THROW(prbep(LabeledScores({}, {1.0})), DegenerateInput);
  EXPECT_THROW(pav_llrs(LabeledScores({1.0}, {})), DegenerateInput);
}

TEST(Rocch, EerUerPrbepOnD1) {
  const RocchCurve c = rocch(kD1);
  EXPECT_DOUBLE_EQ(rocch_eer(c), 0.25);
  EXPECT_DOUBLE_EQ(uer(c, 1.0).value, 0.25);
  EXPECT_DOUBLE_EQ(prbep(kD1), 0.5);
}

TEST(Rocch, UerThroughVertexReturnsVertex) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, 12, 16, 1.0);
    const RocchCurve c = rocch(LabeledScores(t, n));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      if (c.p_miss(k) == 0.0 || c.p_fa(k) == 0.0) continue;
      const HullPoint p = uer(c, c.p_fa(k) / c.p_miss(k));
      EXPECT_NEAR(p.p_miss, c.p_miss(k), 1e-15);
      EXPECT_NEAR(p.p_fa, c.p_fa(k), 1e-15);
    }
  }
}

TEST(Rocch, PavLlrsD1) {
  const LabeledScores l = pav_llrs(kD1);
  EXPECT_EQ(l.tar(0), 0.0);
  EXPECT_EQ(l.tar(1), kInf);
  EXPECT_EQ(l.non(0), -kInf);
  EXPECT_EQ(l.non(1), 0.0);
}

TEST(Rocch, PavLlrsAllTied) {
  const LabeledScores l = pav_llrs(LabeledScores({2.0, 2.0, 2.0}, {2.0, 2.0, 2.0}));
  for (double v : l.tar) EXPECT_EQ(v, 0.0);
  for (double v : l.non) EXPECT_EQ(v, 0.0);
}

TEST(Rocch, SteppyRocD1) {
  const RocchCurve s = steppy_roc(kD1);
  EXPECT_EQ(vertices(s),
            (std::vector<std::pair<double, double>>{{1, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}, {0, 1}}));
}

class RocchRandom : public ::testing::TestWithParam<int> {};

TEST_P(RocchRandom, HullMatchesGeometricOracle) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<int> size(1, 40);
  for (int rep = 0; rep < 40; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, size(rng), size(rng), 1.0, 0.5);
    const LabeledScores s = from(t, n);
    const RocchCurve c = rocch(s);
    const auto want = oracle::hull(t, n);
    ASSERT_EQ(c.size(), static_cast<Eigen::Index>(want.size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      EXPECT_NEAR(c.p_miss(k), want[k].first, 1e-12);
      EXPECT_NEAR(c.p_fa(k), want[k].second, 1e-12);
    }
    EXPECT_LE(c.size(), std::min<Eigen::Index>(s.tar.size(), s.non.size()) + 2);
    for (Eigen::Index k = 1; k < c.size(); ++k) {
      EXPECT_LE(c.p_miss(k), c.p_miss(k - 1));
      EXPECT_GE(c.p_fa(k), c.p_fa(k - 1));
      EXPECT_TRUE(c.p_miss(k) != c.p_miss(k - 1) || c.p_fa(k) != c.p_fa(k - 1));
    }
    // Counts agree with rates.
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      EXPECT_EQ(c.p_miss(k), double(c.miss_count(k)) / double(t.size()));
      EXPECT_EQ(c.p_fa(k), double(c.fa_count(k)) / double(n.size()));
    }
  }
}

TEST_P(RocchRandom, HullMinimumEqualsExhaustiveMinimum) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 100);
  std::uniform_int_distribution<int> size(1, 60);
  for (int rep = 0; rep < 10; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, size(rng), size(rng), 1.5);
    const RocchCurve c = rocch(from(t, n));
    for (int g = 0; g < 1001; ++g) {
      const double pt = (g + 1) / 1002.0;
      EXPECT_NEAR(min_bayes_error(c, pt).raw, oracle::min_bayes_error(t, n, pt), 1e-12);
    }
  }
}

TEST_P(RocchRandom, EerIsTightUpperBoundAndCurveIsConcave) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 200);
  std::uniform_int_distribution<int> size(5, 200);
  for (int rep = 0; rep < 5; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, size(rng), size(rng), 1.0);
    const RocchCurve c = rocch(from(t, n));
    const double eer = rocch_eer(c);
    const int G = 1001;
    std::vector<double> m(G);
    double gap = 0.0;
    for (int g = 0; g < G; ++g) {
      m[g] = min_bayes_error(c, (g + 1) / double(G + 1)).raw;
      EXPECT_LE(m[g], eer + 1e-12);
      if (g) gap = std::max(gap, std::abs(m[g] - m[g - 1]));
    }
    EXPECT_LE(eer - *std::max_element(m.begin(), m.end()), gap + 1e-12);
    for (int g = 1; g + 1 < G; ++g) EXPECT_GE(m[g], 0.5 * (m[g - 1] + m[g + 1]) - 1e-12);
  }
}

TEST_P(RocchRandom, UerMatchesMaxOfMinDcf) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 300);
  std::uniform_int_distribution<int> size(2, 80);
  for (int rep = 0; rep < 10; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, size(rng), size(rng), 1.0);
    const RocchCurve c = rocch(from(t, n));
    for (double r : {0.1, 0.5, 1.0, 3.0, 25.0}) {
      const HullPoint p = uer(c, r);
      EXPECT_NEAR(p.p_fa, r * p.p_miss, 1e-12);
      EXPECT_EQ(p.value, p.p_fa);
      // minDCF(pi, r, 1) is concave in pi; ternary search finds its maximum.
      double lo = 0, hi = 1;
      auto f = [&](double pi) { return oracle::min_dcf(t, n, pi, r, 1.0); };
      for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
        (f(a) < f(b) ? lo : hi) = (f(a) < f(b) ? a : b);
      }
      EXPECT_NEAR(p.value, f(0.5 * (lo + hi)), 1e-9);
    }
  }
}

TEST_P(RocchRandom, PavLlrsAreMonotoneAndWarpInvariant) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 400);
  std::uniform_int_distribution<int> size(1, 50);
  for (int rep = 0; rep < 20; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, size(rng), size(rng), 1.0);
    const LabeledScores s = from(t, n);
    const LabeledScores l = pav_llrs(s);
    LabeledScores warped = s;
    warped.tar = s.tar.array().cube() * 3.0 + 1.0;
    warped.non = s.non.array().cube() * 3.0 + 1.0;
    const LabeledScores lw = pav_llrs(warped);
    EXPECT_TRUE((l.tar.array() == lw.tar.array()).all());
    EXPECT_TRUE((l.non.array() == lw.non.array()).all());
    // Monotone in score across both classes; ties share a value.
    std::vector<std::pair<double, double>> all;
    for (Eigen::Index i = 0; i < s.tar.size(); ++i) all.emplace_back(s.tar(i), l.tar(i));
    for (Eigen::Index i = 0; i < s.non.size(); ++i) all.emplace_back(s.non(i), l.non(i));
    std::sort(all.begin(), all.end());
    for (std::size_t k = 1; k < all.size(); ++k) {
      EXPECT_LE(all[k - 1].second, all[k].second);
      if (all[k - 1].first == all[k].first) {
        EXPECT_EQ(all[k - 1].second, all[k].second);
      }
    }
    // Thresholding the PAV output is already optimal.
    for (double x = -4; x <= 4; x += 0.25) {
      const double pt = 1 / (1 + std::exp(-x));
      EXPECT_NEAR(actual_bayes_error(l, pt).raw, oracle::min_bayes_error(t, n, pt), 1e-12);
    }
  }
}

TEST_P(RocchRandom, TieOrderDoesNotMatter) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 500);
  for (int rep = 0; rep < 20; ++rep) {
    auto [t, n] = oracle::random_dataset(rng, 20, 20, 0.5, 0.9);
    auto t2 = t, n2 = n;
    std::shuffle(t2.begin(), t2.end(), rng);
    std::shuffle(n2.begin(), n2.end(), rng);
    EXPECT_EQ(vertices(rocch(from(t, n))), vertices(rocch(from(t2, n2))));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RocchRandom, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace llrkit
