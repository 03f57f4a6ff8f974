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

// Spin-1 Hamiltonian with isotropic g and a zero-field-splitting tensor.
//
// Units: MHz for energies (E/h), Gauss for fields, radians for angles.
// ZFS principal values follow D_x = -D/3 + E, D_y = -D/3 - E, D_z = 2D/3.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qutrit/linalg.hpp"

namespace qutrit::spin {

/// Bohr magneton over Planck constant, MHz per Gauss (CODATA 2018).
inline constexpr double kBohrMhzPerGauss = 1.39962449361;

/// Eigenstates are labeled by their dominant |M_S> component; the weight
/// must exceed this for the high-field labels to be meaningful.
inline constexpr double kLabelOverlapThreshold = 0.7;

struct ZfsParameters {
  double d_mhz = 0.0;
  double e_mhz = 0.0;
};

class Orientation {
 public:
  Orientation() = default;
  /// theta in [0, pi]; phi is wrapped into [0, 2pi).
  Orientation(double theta, double phi) : theta_(theta), phi_(wrap_angle(phi)) {
    if (!(theta >= 0.0 && theta <= kPi)) {
      throw Error(ErrorCode::kConfiguration,
                  "orientation theta must lie in [0, pi], got " + std::to_string(theta));
    }
  }

  static Orientation from_degrees(double theta_deg, double phi_deg) {
    return {degrees_to_radians(theta_deg), degrees_to_radians(phi_deg)};
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  /// B0 direction expressed in molecular axes.
  Vector3d field_direction() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_),
            std::cos(theta_)};
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Real symmetric traceless 3x3 tensor in MHz.
class LabTensor {
 public:
  static constexpr double kTraceTolerance = 1e-9;
  static constexpr double kSymmetryTolerance = 1e-12;

  LabTensor() : matrix_(Matrix3d::Zero()) {}

  explicit LabTensor(const Matrix3d& matrix) : matrix_(matrix) {
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
      throw Error(ErrorCode::kConventionViolation, "ZFS tensor is not symmetric");
    }
    if (std::abs(matrix.trace()) > kTraceTolerance) {
      throw Error(ErrorCode::kConventionViolation,
                  "ZFS tensor is not traceless (trace " + std::to_string(matrix.trace()) + ")");
    }
    matrix_ = 0.5 * (matrix + matrix.transpose());
  }

  const Matrix3d& matrix() const { return matrix_; }
  double zz() const { return matrix_(2, 2); }

  /// Ascending eigenvalues.
  Vector3d principal_values() const {
    return Eigen::SelfAdjointEigenSolver<Matrix3d>(matrix_).eigenvalues();
  }

 private:
  Matrix3d matrix_;
};

/// Static experiment context. The offsets Delta f+ = f0 - f+ and
/// Delta f- = -(f0 - f-) are always derived, never stored.
class SpinSystem {
 public:
  SpinSystem(double g_factor, double b0_gauss, double f0_mhz, double f_plus_mhz,
             double f_minus_mhz)
      : g_(g_factor), b0_(b0_gauss), f0_(f0_mhz), f_plus_(f_plus_mhz), f_minus_(f_minus_mhz) {
    if (!(g_ > 0.0)) throw Error(ErrorCode::kConfiguration, "g factor must be positive");
    if (!(b0_ >= 0.0)) throw Error(ErrorCode::kConfiguration, "B0 must be non-negative");
  }

  /// Drive frequencies tuned to the exact 0<->+ and 0<->- transitions of
  /// the given tensor at b0.
  static SpinSystem addressing(double g_factor, double b0_gauss, double f0_mhz,
                               const LabTensor& lab);

  double g_factor() const { return g_; }
  double b0() const { return b0_; }
  double f0() const { return f0_; }
  double f_plus() const { return f_plus_; }
  double f_minus() const { return f_minus_; }
  double delta_f_plus() const { return f0_ - f_plus_; }
  double delta_f_minus() const { return -(f0_ - f_minus_); }
  double larmor() const { return g_ * kBohrMhzPerGauss * b0_; }

 private:
  double g_;
  double b0_;
  double f0_;
  double f_plus_;
  double f_minus_;
};

/// Spin-1 operators in the (|+>, |0>, |->) basis.
inline Matrix3c spin_z() {
  Matrix3c s = Matrix3c::Zero();
  s(0, 0) = 1.0;
  s(2, 2) = -1.0;
  return s;
}

inline Matrix3c spin_raise() {
  Matrix3c s = Matrix3c::Zero();
  s(0, 1) = std::sqrt(2.0);
  s(1, 2) = std::sqrt(2.0);
  return s;
}

inline Matrix3c spin_x() { return 0.5 * (spin_raise() + spin_raise().adjoint()); }
inline Matrix3c spin_y() { return (spin_raise() - spin_raise().adjoint()) / (2.0 * kI); }

inline LabTensor build_principal_tensor(const ZfsParameters& zfs) {
  if (std::abs(zfs.e_mhz) > std::abs(zfs.d_mhz) / 3.0 + 1e-12) {
    throw Error(ErrorCode::kConventionViolation,
                "|E| must not exceed |D|/3 (D=" + std::to_string(zfs.d_mhz) +
                    ", E=" + std::to_string(zfs.e_mhz) + ")");
  }
  const double d = zfs.d_mhz;
  const double e = zfs.e_mhz;
  Matrix3d m = Matrix3d::Zero();
  m(0, 0) = -d / 3.0 + e;
  m(1, 1) = -d / 3.0 - e;
  m(2, 2) = 2.0 * d / 3.0;
  return LabTensor(m);
}

/// Rotation whose rows are the lab axes written in molecular coordinates;
/// its last row is the field direction (theta, phi).
inline Matrix3d rotation_matrix(const Orientation& o) {
  const double ct = std::cos(o.theta()), st = std::sin(o.theta());
  const double cp = std::cos(o.phi()), sp = std::sin(o.phi());
  Matrix3d rz;
  rz << cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0;
  Matrix3d ry;
  ry << ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct;
  return (rz * ry).transpose();
}

inline LabTensor rotate_to_lab(const LabTensor& tensor, const Orientation& o) {
  const Matrix3d r = rotation_matrix(o);
  Matrix3d lab = r * tensor.matrix() * r.transpose();
  lab = 0.5 * (lab + lab.transpose());
  // Rounding can leave ~1e-14 of trace; remove it along the diagonal.
  lab.diagonal().array() -= lab.trace() / 3.0;
  return LabTensor(lab);
}

inline Matrix3c hamiltonian(double g_factor, double b0_gauss, const LabTensor& lab) {
  const std::array<Matrix3c, 3> s{spin_x(), spin_y(), spin_z()};
  Matrix3c h = g_factor * kBohrMhzPerGauss * b0_gauss * s[2];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (lab.matrix()(i, j) != 0.0) h += lab.matrix()(i, j) * s[i] * s[j];
    }
  }
  return 0.5 * (h + h.adjoint());
}

inline Matrix3c hamiltonian(const SpinSystem& sys, const LabTensor& lab) {
  if (!(sys.b0() >= 0.0)) throw Error(ErrorCode::kConfiguration, "B0 must be non-negative");
  return hamiltonian(sys.g_factor(), sys.b0(), lab);
}

/// Eigenpairs indexed by M_S label: energies(kPlusLevel) is E(|+>), etc.
struct LabeledLevels {
  Vector3d energies;
  Matrix3c states;  // column k is the eigenvector labeled k
};

inline LabeledLevels labeled_levels(const Matrix3c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  LabeledLevels out;
  std::array<bool, 3> taken{false, false, false};
  for (int col = 0; col < 3; ++col) {
    const Vector3c v = es.eigenvectors().col(col);
    int label = 0;
    v.cwiseAbs2().maxCoeff(&label);
    if (std::norm(v(label)) <= kLabelOverlapThreshold || taken[label]) {
      throw Error(ErrorCode::kRegime,
                  "eigenstates cannot be labeled by M_S (high-field approximation fails)");
    }
    taken[label] = true;
    out.energies(label) = es.eigenvalues()(col);
    out.states.col(label) = v;
  }
  return out;
}

struct TransitionFrequencies {
  double plus = 0.0;   // E(|+>) - E(|0>)
  double minus = 0.0;  // E(|0>) - E(|->)
};

inline TransitionFrequencies transition_frequencies(const Matrix3c& h) {
  const LabeledLevels levels = labeled_levels(h);
  return {levels.energies(kPlusLevel) - levels.energies(kZeroLevel),
          levels.energies(kZeroLevel) - levels.energies(kMinusLevel)};
}

/// Energies ordered by decreasing <S_z> (ties broken by energy), usable down
/// to zero field where M_S labels lose meaning. Returned as (E+, E0, E-).
inline Vector3d levels_by_spin_projection(const Matrix3c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  const Matrix3c sz = spin_z();
  std::array<int, 3> order{0, 1, 2};
  std::array<double, 3> projection{};
  for (int k = 0; k < 3; ++k) {
    const Vector3c v = es.eigenvectors().col(k);
    projection[k] = (v.adjoint() * sz * v)(0, 0).real();
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(projection[a] - projection[b]) > 1e-9) return projection[a] > projection[b];
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  return {es.eigenvalues()(order[0]), es.eigenvalues()(order[1]), es.eigenvalues()(order[2])};
}

inline double resonance_field(double f0_mhz, double g_factor) {
  if (!(g_factor > 0.0)) throw Error(ErrorCode::kConfiguration, "g factor must be positive");
  return f0_mhz / (g_factor * kBohrMhzPerGauss);
}

inline SpinSystem SpinSystem::addressing(double g_factor, double b0_gauss, double f0_mhz,
                                         const LabTensor& lab) {
  const TransitionFrequencies f = transition_frequencies(hamiltonian(g_factor, b0_gauss, lab));
  return SpinSystem(g_factor, b0_gauss, f0_mhz, f.plus, f.minus);
}

/// Reference operating point. The quoted |D|, |E| are magnitudes; both are taken
/// negative so that the lab D_zz at (40 deg, 0) is about -60 MHz and the
/// 0<->+ line sits below f0, consistent with Delta f+ + Delta f- = -3 D_zz.
struct OperatingPoint {
  static constexpr double kG = 2.0037;
  static constexpr double kB0Gauss = 3299.0;
  static constexpr double kF0Mhz = 9250.5;
  static constexpr double kDMhz = -152.0;
  static constexpr double kEMhz = -50.4;
  static constexpr double kThetaDeg = 40.0;
  static constexpr double kPhiDeg = 0.0;

  static ZfsParameters zfs() { return {kDMhz, kEMhz}; }
  static Orientation orientation() { return Orientation::from_degrees(kThetaDeg, kPhiDeg); }
  static LabTensor lab_tensor() {
    return rotate_to_lab(build_principal_tensor(zfs()), orientation());
  }
  static SpinSystem system() { return SpinSystem::addressing(kG, kB0Gauss, kF0Mhz, lab_tensor()); }
};

}  // namespace qutrit::spin
