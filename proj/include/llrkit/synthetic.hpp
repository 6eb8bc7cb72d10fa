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

// Seeded two-Gaussian score generator.

#ifndef LLRKIT_SYNTHETIC_HPP
#define LLRKIT_SYNTHETIC_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "llrkit/trial_data.hpp"

namespace llrkit {

struct GaussianScoreModel {
  double tar_mean = 3.0;
  double tar_sd = 2.0;
  double non_mean = 0.0;
  double non_sd = 1.0;

  /// log N(s; tar) / N(s; non), in nats.
  double llr(double s) const {
    const double zt = (s - tar_mean) / tar_sd;
    const double zn = (s - non_mean) / non_sd;
    return 0.5 * (zn * zn - zt * zt) + std::log(non_sd / tar_sd);
  }
};

inline LabeledScores gaussian_scores(Eigen::Index targets, Eigen::Index nontargets, std::uint64_t seed,
                                     const GaussianScoreModel& m = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  LabeledScores out;
  out.tar.resize(targets);
  out.non.resize(nontargets);
  for (Eigen::Index i = 0; i < targets; ++i) out.tar(i) = m.tar_mean + m.tar_sd * z(rng);
  for (Eigen::Index i = 0; i < nontargets; ++i) out.non(i) = m.non_mean + m.non_sd * z(rng);
  return out;
}

}  // namespace llrkit

#endif  // LLRKIT_SYNTHETIC_HPP
