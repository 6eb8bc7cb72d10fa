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

// Pool-adjacent-violators isotonic regression.

#ifndef LLRKIT_PAV_HPP
#define LLRKIT_PAV_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/errors.hpp"

namespace llrkit {

/// Weighted least-squares nondecreasing fit, stored as runs of equal value.
///
/// Block values are strictly increasing: adjacent blocks with equal means are
/// always pooled.  `sums[b] / weights[b] == values[b]`.
template <typename Scalar>
struct PavBlocks {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Scalar> values;
  std::vector<std::size_t> sizes;
  std::vector<Scalar> weights;
  std::vector<Scalar> sums;

  std::size_t block_count() const { return values.size(); }

  /// Fitted value for every input point.
  Vector expand() const {
    std::size_t n = 0;
    for (auto s : sizes) n += s;
    Vector out(static_cast<Eigen::Index>(n));
    Eigen::Index k = 0;
    for (std::size_t b = 0; b < values.size(); ++b) {
      out.segment(k, static_cast<Eigen::Index>(sizes[b])).setConstant(values[b]);
      k += static_cast<Eigen::Index>(sizes[b]);
    }
    return out;
  }
};

/// PAV on pre-multiplied data: point i has weight `weights[i]` and weighted
/// value `sums[i]` (value times weight).  Passing exact integer sums (target
/// counts) and weights (trial counts) keeps every pooled mean a correctly
/// rounded rational, so equal means compare equal.
template <typename DerivedS, typename DerivedW>
PavBlocks<typename DerivedS::Scalar> pav_fit_sums(const Eigen::MatrixBase<DerivedS>& sums,
                                                  const Eigen::MatrixBase<DerivedW>& weights,
                                                  const std::vector<std::size_t>* sizes = nullptr) {
  using Scalar = typename DerivedS::Scalar;
  const Eigen::Index n = sums.size();
  if (n == 0) throw EmptyInput("pav: no points");
  if (weights.size() != n) throw DimensionMismatch("pav: values and weights differ in length");

  PavBlocks<Scalar> out;
  out.values.reserve(static_cast<std::size_t>(n));
  out.sizes.reserve(static_cast<std::size_t>(n));
  out.weights.reserve(static_cast<std::size_t>(n));
  out.sums.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar w = weights(i);
    if (!(w > Scalar(0))) throw InvalidArgument("pav: weights must be positive");
    out.sums.push_back(sums(i));
    out.weights.push_back(w);
    out.values.push_back(sums(i) / w);
    out.sizes.push_back(sizes ? (*sizes)[static_cast<std::size_t>(i)] : 1);
    // Pool while the previous block is not strictly below the new one.
    while (out.values.size() > 1 && out.values[out.values.size() - 2] >= out.values.back()) {
      const std::size_t last = out.values.size() - 1;
      const std::size_t prev = last - 1;
      out.sums[prev] += out.sums[last];
      out.weights[prev] += out.weights[last];
      out.sizes[prev] += out.sizes[last];
      out.values[prev] = out.sums[prev] / out.weights[prev];
      out.sums.pop_back();
      out.weights.pop_back();
      out.sizes.pop_back();
      out.values.pop_back();
    }
  }
  return out;
}

/// Classical weighted PAV.  Inputs are in the caller's order (ascending
/// score); weights must be positive.
template <typename DerivedV, typename DerivedW>
PavBlocks<typename DerivedV::Scalar> pav_fit(const Eigen::MatrixBase<DerivedV>& values,
                                             const Eigen::MatrixBase<DerivedW>& weights) {
  if (values.size() != weights.size()) throw DimensionMismatch("pav: values and weights differ in length");
  return pav_fit_sums(values.cwiseProduct(weights).eval(), weights);
}

template <typename DerivedV>
PavBlocks<typename DerivedV::Scalar> pav_fit(const Eigen::MatrixBase<DerivedV>& values) {
  using Scalar = typename DerivedV::Scalar;
  return pav_fit_sums(values, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(values.size()));
}

}  // namespace llrkit

#endif  // LLRKIT_PAV_HPP
