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

#ifndef LLRKIT_NUMERIC_HPP
#define LLRKIT_NUMERIC_HPP

#include <cmath>
#include <numbers>

namespace llrkit {

template <typename Scalar>
Scalar logit(Scalar p) {
  return std::log(p) - std::log1p(-p);
}

/// Inverse of logit (the logistic sigmoid).
template <typename Scalar>
Scalar logistic(Scalar x) {
  if (x >= 0) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// log(1 + e^x) without overflow; +inf maps to +inf and -inf to 0.
template <typename Scalar>
Scalar softplus(Scalar x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

template <typename Scalar>
Scalar ln2() {
  return std::numbers::ln2_v<Scalar>;
}

/// probit(p) = sqrt(2) erfinv(2p - 1), the standard normal quantile.
/// Acklam's rational approximation refined by one Halley step against erfc.
double probit(double p);

}  // namespace llrkit

#endif  // LLRKIT_NUMERIC_HPP
