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

// Trust-region Newton method with truncated (Steihaug) conjugate-gradient
// subproblem solves, for smooth unconstrained minimization.
//
// The objective is only seen through three callbacks: value, gradient and
// Hessian-vector products.  The Hessian is never formed.

#ifndef LLRKIT_TRUST_REGION_HPP
#define LLRKIT_TRUST_REGION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "llrkit/errors.hpp"

namespace llrkit {

template <typename Scalar>
struct ObjectiveOracle {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  /// v -> H(w) v at a fixed w.
  using HessianOperator = std::function<Vector(const Vector&)>;

  Eigen::Index dimension = 0;
  /// f(w); writes the gradient when `grad` is non-null.
  std::function<Scalar(const Vector& w, Vector* grad)> value_and_gradient;
  /// Curvature at w, as an operator.
  std::function<HessianOperator(const Vector& w)> hessian_at;

  Scalar value(const Vector& w) const { return value_and_gradient(w, nullptr); }
  Vector gradient(const Vector& w) const {
    Vector g(dimension);
    value_and_gradient(w, &g);
    return g;
  }
  Vector hessian_times(const Vector& w, const Vector& v) const { return hessian_at(w)(v); }
};

template <typename Scalar>
struct TrOptions {
  /// Unset: the norm of the initial gradient (1 if that is zero).
  std::optional<Scalar> initial_radius;
  Scalar max_radius = Scalar(1e10);
  /// Steps with reduction ratio below this are rejected.
  Scalar accept_ratio = Scalar(0.05);
  /// Boundary steps with ratio above this grow the radius.
  Scalar expand_ratio = Scalar(0.75);
  Scalar shrink_factor = Scalar(0.25);
  Scalar grow_factor = Scalar(2);
  /// Stop once |grad| <= gradient_tolerance * |grad at w0|.
  Scalar gradient_tolerance = Scalar(1e-7);
  int max_iterations = 200;
  /// 0 means the problem dimension.
  int max_cg_iterations = 0;
  /// CG stops at |r| <= min(cg_forcing_cap, sqrt|g|) |g|.
  Scalar cg_forcing_cap = Scalar(0.5);
};

enum class TrTermination {
  Converged,
  /// Outer iteration cap reached before the gradient test passed.
  IterationLimit,
  /// Trust region shrank below floating-point resolution of the iterate.
  RadiusCollapsed,
};

template <typename Scalar>
struct TrResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector w;
  Scalar f = 0;
  int iterations = 0;
  int accepted_steps = 0;
  int cg_iterations = 0;
  std::vector<Scalar> gradient_norms;
  /// f at w0 and after every accepted step.
  std::vector<Scalar> values;
  TrTermination termination = TrTermination::IterationLimit;

  bool converged() const { return termination == TrTermination::Converged; }
};

namespace detail {

template <typename Scalar>
struct CgStep {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p;
  bool on_boundary = false;
  int iterations = 0;
};

// Positive root tau of |z + tau d| = radius, for |z| <= radius.
template <typename Vector, typename Scalar>
Scalar to_boundary(const Vector& z, const Vector& d, Scalar radius) {
  const Scalar a = d.squaredNorm();
  const Scalar b = Scalar(2) * z.dot(d);
  const Scalar c = std::min(Scalar(0), z.squaredNorm() - radius * radius);
  const Scalar disc = std::sqrt(b * b - Scalar(4) * a * c);
  return b <= Scalar(0) ? (-b + disc) / (Scalar(2) * a) : (Scalar(2) * -c) / (b + disc);
}

template <typename Scalar>
CgStep<Scalar> steihaug_cg(const typename ObjectiveOracle<Scalar>::HessianOperator& hess,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& g, Scalar radius, Scalar tol,
                           int max_iter) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  CgStep<Scalar> out;
  Vector z = Vector::Zero(g.size());
  Vector r = g;
  Vector d = -r;
  Scalar rr = r.squaredNorm();
  for (int j = 0; j < max_iter; ++j) {
    if (std::sqrt(rr) <= tol) break;
    ++out.iterations;
    const Vector hd = hess(d);
    const Scalar dhd = d.dot(hd);
    if (!(dhd > Scalar(0))) {
      out.p = z + to_boundary(z, d, radius) * d;
      out.on_boundary = true;
      return out;
    }
    const Scalar alpha = rr / dhd;
    Vector z_next = z + alpha * d;
    if (z_next.norm() > radius) {
      out.p = z + to_boundary(z, d, radius) * d;
      out.on_boundary = true;
      return out;
    }
    z = std::move(z_next);
    r += alpha * hd;
    const Scalar rr_next = r.squaredNorm();
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
  }
  out.p = std::move(z);
  return out;
}

template <typename Scalar, typename Vector>
void require_finite(Scalar f, const Vector& g, const char* where) {
  if (!std::isfinite(f)) throw OracleFailure(std::string("non-finite objective value at ") + where);
  if (!g.allFinite()) throw OracleFailure(std::string("non-finite gradient at ") + where);
}

}  // namespace detail

template <typename Scalar>
TrResult<Scalar> minimize(const ObjectiveOracle<Scalar>& oracle,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& w0,
                          const TrOptions<Scalar>& opts = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (w0.size() != oracle.dimension) throw DimensionMismatch("starting point does not match objective dimension");
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();

  TrResult<Scalar> res;
  res.w = w0;
  Vector g(oracle.dimension);
  res.f = oracle.value_and_gradient(res.w, &g);
  detail::require_finite(res.f, g, "the starting point");
  res.values.push_back(res.f);

  const Scalar gnorm0 = g.norm();
  const Scalar gtol = opts.gradient_tolerance * gnorm0;
  Scalar radius = opts.initial_radius.value_or(gnorm0 > Scalar(0) ? gnorm0 : Scalar(1));
  const int cg_cap = opts.max_cg_iterations > 0 ? opts.max_cg_iterations : static_cast<int>(oracle.dimension);

  Vector g_trial(oracle.dimension);
  for (;;) {
    const Scalar gnorm = g.norm();
    res.gradient_norms.push_back(gnorm);
    if (gnorm <= gtol || gnorm == Scalar(0)) {
      res.termination = TrTermination::Converged;
      break;
    }
    if (res.iterations >= opts.max_iterations) {
      res.termination = TrTermination::IterationLimit;
      break;
    }
    ++res.iterations;

    const auto hess = oracle.hessian_at(res.w);
    const Scalar cg_tol = std::min(opts.cg_forcing_cap, std::sqrt(gnorm)) * gnorm;
    auto step = detail::steihaug_cg<Scalar>(hess, g, radius, cg_tol, cg_cap);
    res.cg_iterations += step.iterations;
    const Scalar pnorm = step.p.norm();

    const Scalar predicted = -(g.dot(step.p) + Scalar(0.5) * step.p.dot(hess(step.p)));
    const Vector w_trial = res.w + step.p;
    const Scalar f_trial = oracle.value_and_gradient(w_trial, &g_trial);
    if (std::isnan(f_trial)) throw OracleFailure("objective returned NaN at a trial point");
    const Scalar actual = res.f - f_trial;

    // Both reductions below roundoff: the model is as good as it gets.
    const Scalar noise = Scalar(10) * eps * std::max(Scalar(1), std::abs(res.f));
    Scalar ratio;
    if (std::abs(predicted) <= noise && actual >= -noise && std::isfinite(f_trial)) {
      ratio = Scalar(1);
    } else if (!(predicted > Scalar(0)) || !std::isfinite(f_trial)) {
      ratio = -std::numeric_limits<Scalar>::infinity();
    } else {
      ratio = actual / predicted;
    }

    if (ratio < opts.accept_ratio) {
      radius = opts.shrink_factor * std::min(radius, pnorm);
    } else {
      if (!g_trial.allFinite()) throw OracleFailure("non-finite gradient at an accepted point");
      res.w = w_trial;
      res.f = f_trial;
      g = g_trial;
      ++res.accepted_steps;
      res.values.push_back(res.f);
      if (ratio > opts.expand_ratio && (step.on_boundary || pnorm >= radius * (Scalar(1) - Scalar(1e-12)))) {
        radius = std::min(opts.grow_factor * radius, opts.max_radius);
      }
    }
    if (radius <= eps * std::max(Scalar(1), res.w.norm())) {
      res.gradient_norms.push_back(g.norm());
      res.termination = TrTermination::RadiusCollapsed;
      break;
    }
  }
  return res;
}

}  // namespace llrkit

#endif  // LLRKIT_TRUST_REGION_HPP
