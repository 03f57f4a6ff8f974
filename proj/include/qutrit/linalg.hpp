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

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "qutrit/error.hpp"

namespace qutrit {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Matrix3d = Eigen::Matrix3d;
using Vector3c = Eigen::Vector3cd;
using Vector3d = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Basis order is (|+>, |0>, |->) everywhere.
enum Level : int { kPlusLevel = 0, kZeroLevel = 1, kMinusLevel = 2 };

inline double max_abs(const Matrix3c& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_error(const Matrix3c& m) {
  return max_abs(m - m.adjoint());
}

inline double unitarity_error(const Matrix3c& u) {
  return max_abs(u.adjoint() * u - Matrix3c::Identity());
}

/// exp(-i h t) for Hermitian h, via eigendecomposition so the result is
/// unitary to rounding.
inline Matrix3c unitary_exp(const Matrix3c& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  Vector3c phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::exp(-kI * es.eigenvalues()(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-tolerance, 0) are clipped; anything more negative is an invalid state.
inline Matrix3c sqrt_psd(const Matrix3c& m, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (m + m.adjoint()));
  Vector3c roots;
  for (int k = 0; k < 3; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -tolerance) {
      throw Error(ErrorCode::kInvalidState,
                  "matrix is not positive semidefinite (eigenvalue " +
                      std::to_string(lambda) + ")");
    }
    roots(k) = std::sqrt(std::max(lambda, 0.0));
  }
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

inline double wrap_angle(double angle) {
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

inline double degrees_to_radians(double deg) { return deg * kPi / 180.0; }
inline double radians_to_degrees(double rad) { return rad * 180.0 / kPi; }

}  // namespace qutrit
