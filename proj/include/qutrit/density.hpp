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

#include <string>

#include "qutrit/linalg.hpp"

namespace qutrit {

/// 3x3 Hermitian, unit-trace, positive semidefinite state over
/// (|+>, |0>, |->). Construction validates; instances are immutable.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityMatrix(const Matrix3c& elements, double psd_tolerance = kTolerance)
      : elements_(elements), psd_tolerance_(psd_tolerance) {
    if (!elements.allFinite()) {
      throw Error(ErrorCode::kInvalidState, "density matrix has non-finite entries");
    }
    if (hermiticity_error(elements) > kTolerance) {
      throw Error(ErrorCode::kInvalidState, "density matrix is not Hermitian");
    }
    const double trace = elements.trace().real();
    if (std::abs(trace - 1.0) > kTolerance) {
      throw Error(ErrorCode::kInvalidState,
                  "density matrix trace is " + std::to_string(trace) + ", expected 1");
    }
    elements_ = 0.5 * (elements + elements.adjoint());
    const double lowest = eigenvalues()(0);
    if (lowest < -psd_tolerance) {
      throw Error(ErrorCode::kInvalidState,
                  "density matrix has negative eigenvalue " + std::to_string(lowest));
    }
  }

  static DensityMatrix pure(const Vector3c& ket) {
    const Vector3c v = ket.normalized();
    return DensityMatrix(v * v.adjoint());
  }

  static DensityMatrix basis(Level level) {
    Vector3c v = Vector3c::Zero();
    v(level) = 1.0;
    return pure(v);
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix3c::Identity() / 3.0); }

  /// Ingests a matrix printed with rounded entries: Hermitian part, trace
  /// renormalized, PSD accepted within `psd_tolerance`.
  static DensityMatrix from_rounded(const Matrix3c& printed, double psd_tolerance) {
    Matrix3c m = 0.5 * (printed + printed.adjoint());
    m /= m.trace().real();
    return DensityMatrix(m, psd_tolerance);
  }

  /// Eigenvalue clipping onto the PSD cone followed by renormalization.
  static DensityMatrix project(const Matrix3c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (m + m.adjoint()));
    Vector3d clipped = es.eigenvalues().cwiseMax(0.0);
    const double sum = clipped.sum();
    if (!(sum > 0.0)) throw Error(ErrorCode::kInvalidState, "cannot project zero matrix");
    clipped /= sum;
    const Matrix3c v = es.eigenvectors();
    return DensityMatrix(v * clipped.cast<Complex>().asDiagonal() * v.adjoint());
  }

  const Matrix3c& matrix() const { return elements_; }
  Complex operator()(int row, int col) const { return elements_(row, col); }
  double psd_tolerance() const { return psd_tolerance_; }

  Vector3d populations() const { return elements_.diagonal().real(); }
  double population(Level level) const { return elements_(level, level).real(); }

  Vector3d eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<Matrix3c>(elements_, Eigen::EigenvaluesOnly)
        .eigenvalues();
  }

 private:
  Matrix3c elements_;
  double psd_tolerance_;
};

}  // namespace qutrit
