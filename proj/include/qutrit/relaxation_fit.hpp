// Copyright 2026 The Qutrit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include <unsupported/Eigen/NonLinearOptimization>

#include "qutrit/error.hpp"

namespace qutrit::pulse {

/// y(t) = amplitude * exp(-t / time_constant) + offset
struct ExponentialFit {
  double amplitude = 0.0;
  double time_constant = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};

namespace detail {

struct DecayFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const double> t;
  std::span<const double> y;
  double t_scale;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(t.size()); }

  // x = (amplitude, log(time_constant / t_scale), offset)
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const double tc = t_scale * std::exp(x(1));
    for (std::size_t i = 0; i < t.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) = x(0) * std::exp(-t[i] / tc) + x(2) - y[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    const double tc = t_scale * std::exp(x(1));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double e = std::exp(-t[i] / tc);
      jac(row, 0) = e;
      jac(row, 1) = x(0) * e * t[i] / tc;
      jac(row, 2) = 1.0;
    }
    return 0;
  }
};

}  // namespace detail

/// Levenberg-Marquardt least-squares fit of a single exponential with
/// offset. Initial guess from the end points and the 1/e crossing.
inline ExponentialFit fit_exponential_decay(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 4) {
    throw Error(ErrorCode::kConfiguration, "exponential fit needs >= 4 paired samples");
  }
  const double t_span = t.back() - t.front();
  if (!(t_span > 0.0)) throw Error(ErrorCode::kConfiguration, "sample times must increase");

  const double offset0 = y.back();
  const double amp0 = y.front() - offset0;
  double tc0 = t_span / 3.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(y[i] - offset0) < std::abs(amp0) / std::exp(1.0)) {
      tc0 = std::max(t[i] - t.front(), t_span / static_cast<double>(t.size()));
      break;
    }
  }

  detail::DecayFunctor functor{t, y, t_span};
  Eigen::VectorXd x(3);
  x << amp0, std::log(tc0 / t_span), offset0;
  Eigen::LevenbergMarquardt<detail::DecayFunctor> lm(functor);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  lm.minimize(x);

  Eigen::VectorXd r(static_cast<Eigen::Index>(t.size()));
  functor(x, r);
  return {x(0), t_span * std::exp(x(1)), x(2),
          std::sqrt(r.squaredNorm() / static_cast<double>(t.size()))};
}

}  // namespace qutrit::pulse
