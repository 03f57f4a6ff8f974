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

// Superposition-state preparation, population-difference readout, linear
// density-matrix tomography and Uhlmann fidelity.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qutrit/density.hpp"
#include "qutrit/pulse_engine.hpp"

namespace qutrit::tomo {

using pulse::PulseSpec;
using pulse::PulseStyle;
using pulse::RelaxationParams;
using pulse::SequenceProgram;
using pulse::Setup;
using pulse::Transition;

// Rotations about -y on 0<->+ and +y on 0<->- take |0> to real, positive
// amplitudes on the neighbouring level.
inline constexpr double kPlusBasePhase = -kPi / 2.0;
inline constexpr double kMinusBasePhase = kPi / 2.0;

inline constexpr double kReadoutDelayUs = 40.0;

enum class TargetState { kPsi1, kPsi2 };

struct PreparationPulse {
  Transition transition;
  double tip;
  double base_phase;
};

inline double base_phase(Transition t) {
  return t == Transition::kPlus ? kPlusBasePhase : kMinusBasePhase;
}

/// psi1: pi/2 at f+ then pi at f-. psi2: arccos(1/3) at f+ then pi/2 at f-.
inline std::array<PreparationPulse, 2> preparation_pulses(TargetState state) {
  if (state == TargetState::kPsi1) {
    return {{{Transition::kPlus, kPi / 2.0, kPlusBasePhase},
             {Transition::kMinus, kPi, kMinusBasePhase}}};
  }
  return {{{Transition::kPlus, std::acos(1.0 / 3.0), kPlusBasePhase},
           {Transition::kMinus, kPi / 2.0, kMinusBasePhase}}};
}

inline SequenceProgram prepare(TargetState state, const PulseStyle& style = PulseStyle::ideal(),
                               std::optional<RelaxationParams> relaxation = std::nullopt) {
  SequenceProgram prog;
  for (const PreparationPulse& p : preparation_pulses(state)) {
    prog.steps.emplace_back(style.make(p.transition, p.tip, p.base_phase));
  }
  prog.relaxation = relaxation;
  return prog;
}

inline SequenceProgram prepare_psi1(const PulseStyle& style = PulseStyle::ideal(),
                                    std::optional<RelaxationParams> relaxation = std::nullopt) {
  return prepare(TargetState::kPsi1, style, relaxation);
}

inline SequenceProgram prepare_psi2(const PulseStyle& style = PulseStyle::ideal(),
                                    std::optional<RelaxationParams> relaxation = std::nullopt) {
  return prepare(TargetState::kPsi2, style, relaxation);
}

/// (|+> + |->)/sqrt2 and (|+> + |0> + |->)/sqrt3.
inline DensityMatrix ideal_state(TargetState state) {
  return state == TargetState::kPsi1 ? DensityMatrix::pure(Vector3c(1.0, 0.0, 1.0))
                                     : DensityMatrix::pure(Vector3c(1.0, 1.0, 1.0));
}

/// Experimental density matrices as printed (two decimals).
inline Matrix3c reported_density(TargetState state) {
  Matrix3c m;
  if (state == TargetState::kPsi1) {
    m << Complex(0.50, 0.0), Complex(-0.05, 0.02), Complex(0.29, 0.0),
        Complex(-0.05, -0.02), Complex(0.04, 0.0), Complex(-0.02, 0.04),
        Complex(0.29, 0.0), Complex(-0.02, -0.04), Complex(0.45, 0.0);
  } else {
    m << Complex(0.37, 0.0), Complex(0.27, 0.03), Complex(0.28, 0.04),
        Complex(0.27, -0.03), Complex(0.31, 0.0), Complex(0.29, 0.01),
        Complex(0.28, -0.04), Complex(0.29, -0.01), Complex(0.33, 0.0);
  }
  return m;
}

/// Readout: decoherence delay, then (p_upper - p_lower)/2 on the addressed
/// transition. For kPlus this is M^{0+} = (p+ - p0)/2.
struct Readout {
  double delay_us = kReadoutDelayUs;
  std::optional<RelaxationParams> relaxation = RelaxationParams::reported();
  double sign = 1.0;

  static Readout ideal() { return {kReadoutDelayUs, std::nullopt, 1.0}; }
};

/// Linear in `rho`; accepts traceless operators.
inline double population_signal(const Matrix3c& rho, Transition t, const Readout& readout) {
  const Matrix3c settled =
      readout.relaxation ? pulse::relax(rho, readout.delay_us, *readout.relaxation) : rho;
  const double upper = t == Transition::kPlus ? settled(kPlusLevel, kPlusLevel).real()
                                              : settled(kZeroLevel, kZeroLevel).real();
  const double lower = t == Transition::kPlus ? settled(kZeroLevel, kZeroLevel).real()
                                              : settled(kMinusLevel, kMinusLevel).real();
  return readout.sign * 0.5 * (upper - lower);
}

inline double measure_population_difference(const DensityMatrix& rho, Transition t,
                                            const Readout& readout = {}) {
  return population_signal(rho.matrix(), t, readout);
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

/// Uhlmann fidelity [Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2. A pure
/// argument reduces it to <psi|other|psi>, which avoids square roots of
/// rounding-level eigenvalues; those are also floored in the general case.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  constexpr double kPureTolerance = 1e-12;
  constexpr double kRoundingFloor = 1e-14;
  const double tolerance = std::max(rho.psd_tolerance(), sigma.psd_tolerance());
  for (const auto& pair : {std::array{&sigma, &rho}, std::array{&rho, &sigma}}) {
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(pair[0]->matrix());
    if (es.eigenvalues()(2) >= 1.0 - kPureTolerance) {
      const Vector3c psi = es.eigenvectors().col(2);
      const double f = (psi.adjoint() * pair[1]->matrix() * psi)(0, 0).real();
      if (f < -tolerance) throw Error(ErrorCode::kInvalidState, "fidelity input is not PSD");
      return std::clamp(f, 0.0, 1.0);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix3c> sigma_es(sigma.matrix());
  Vector3c roots;
  for (int k = 0; k < 3; ++k) {
    const double lambda = sigma_es.eigenvalues()(k);
    if (lambda < -tolerance) {
      throw Error(ErrorCode::kInvalidState, "fidelity input is not positive semidefinite");
    }
    roots(k) = lambda > kRoundingFloor ? std::sqrt(lambda) : 0.0;
  }
  const Matrix3c root_sigma =
      sigma_es.eigenvectors() * roots.asDiagonal() * sigma_es.eigenvectors().adjoint();
  const Matrix3c inner = root_sigma * rho.matrix() * root_sigma;
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (inner + inner.adjoint()),
                                             Eigen::EigenvaluesOnly);
  double trace_root = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -tolerance) {
      throw Error(ErrorCode::kInvalidState, "fidelity input is not positive semidefinite");
    }
    if (lambda > kRoundingFloor) trace_root += std::sqrt(lambda);
  }
  const double f = trace_root * trace_root;
  constexpr double kSlack = 1e-9;
  if (f < -kSlack || f > 1.0 + kSlack) {
    throw Error(ErrorCode::kInvalidState, "fidelity outside [0, 1]: " + std::to_string(f));
  }
  return std::clamp(f, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Tomography

struct MeasurementSetting {
  std::string label;
  std::vector<PulseSpec> analysis;  // ideal definitions, applied in order
  Transition readout = Transition::kPlus;
};

/// 14 settings: populations on both transitions; +-pi/2 at phases 0 and pi/2
/// on each transition (rho_{0+}, rho_{0-}); and a pi pulse on one transition
/// followed by pi/2 analysis on the other (rho_{+-}).
inline std::vector<MeasurementSetting> standard_settings() {
  std::vector<MeasurementSetting> out;
  out.push_back({"populations/plus", {}, Transition::kPlus});
  out.push_back({"populations/minus", {}, Transition::kMinus});
  for (Transition t : {Transition::kPlus, Transition::kMinus}) {
    for (double tip : {kPi / 2.0, -kPi / 2.0}) {
      for (double phase : {0.0, kPi / 2.0}) {
        const std::string label = std::string(pulse::to_string(t)) +
                                  (tip > 0 ? "/+90" : "/-90") + (phase == 0.0 ? "x" : "y");
        out.push_back({label, {PulseSpec::ideal(t, tip, phase)}, t});
      }
    }
  }
  for (double phase : {0.0, kPi / 2.0}) {
    const std::string axis = phase == 0.0 ? "x" : "y";
    out.push_back({"minus/180x,plus/90" + axis,
                   {PulseSpec::ideal(Transition::kMinus, kPi, 0.0),
                    PulseSpec::ideal(Transition::kPlus, kPi / 2.0, phase)},
                   Transition::kPlus});
    out.push_back({"plus/180x,minus/90" + axis,
                   {PulseSpec::ideal(Transition::kPlus, kPi, 0.0),
                    PulseSpec::ideal(Transition::kMinus, kPi / 2.0, phase)},
                   Transition::kMinus});
  }
  return out;
}

struct TomographyOptions {
  std::vector<MeasurementSetting> settings = standard_settings();
  Readout readout{};
  PulseStyle analysis_style = PulseStyle::ideal();
};

struct TomographyResult {
  DensityMatrix rho;
  std::vector<std::string> settings_used;
  double residual = 0.0;
  Matrix3c unprojected;  // least-squares estimate before PSD projection
};

/// Gell-Mann matrices, Tr(l_i l_j) = 2 delta_ij.
inline std::array<Matrix3c, 8> gell_mann_basis() {
  std::array<Matrix3c, 8> l;
  for (auto& m : l) m.setZero();
  l[0](0, 1) = l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI;
  l[1](1, 0) = kI;
  l[2](0, 0) = 1.0;
  l[2](1, 1) = -1.0;
  l[3](0, 2) = l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI;
  l[4](2, 0) = kI;
  l[5](1, 2) = l[5](2, 1) = 1.0;
  l[6](1, 2) = -kI;
  l[6](2, 1) = kI;
  l[7](0, 0) = l[7](1, 1) = 1.0 / std::sqrt(3.0);
  l[7](2, 2) = -2.0 / std::sqrt(3.0);
  return l;
}

namespace detail {

inline Matrix3c analysis_unitary(const MeasurementSetting& s) {
  Matrix3c u = Matrix3c::Identity();
  for (const PulseSpec& p : s.analysis) u = pulse::ideal_rotation(p.transition, p.tip_angle, p.phase) * u;
  return u;
}

/// Row k maps the 8 Bloch-vector components onto signal k.
inline Eigen::MatrixXd design_matrix(const TomographyOptions& opt) {
  const auto basis = gell_mann_basis();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(opt.settings.size()), 8);
  for (std::size_t k = 0; k < opt.settings.size(); ++k) {
    const Matrix3c u = analysis_unitary(opt.settings[k]);
    for (int j = 0; j < 8; ++j) {
      const Matrix3c moved = u * (0.5 * basis[j]) * u.adjoint();
      a(static_cast<Eigen::Index>(k), j) =
          population_signal(moved, opt.settings[k].readout, opt.readout);
    }
  }
  return a;
}

}  // namespace detail

/// Least-squares inversion of measured signals (one per setting), then
/// projection onto valid density matrices.
inline TomographyResult reconstruct(const Eigen::VectorXd& signals, const TomographyOptions& opt) {
  if (signals.size() != static_cast<Eigen::Index>(opt.settings.size())) {
    throw Error(ErrorCode::kConfiguration, "one signal per measurement setting expected");
  }
  const Eigen::MatrixXd a = detail::design_matrix(opt);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() < 8 || sv(7) <= 1e-10 * sv(0)) {
    throw Error(ErrorCode::kSettingsIncomplete,
                "measurement settings do not determine all 8 density-matrix parameters");
  }
  const Eigen::VectorXd x = svd.solve(signals);
  const auto basis = gell_mann_basis();
  Matrix3c estimate = Matrix3c::Identity() / 3.0;
  for (int j = 0; j < 8; ++j) estimate += 0.5 * x(j) * basis[j];

  std::vector<std::string> labels;
  for (const auto& s : opt.settings) labels.push_back(s.label);
  return {DensityMatrix::project(estimate), std::move(labels), (a * x - signals).norm(), estimate};
}

/// Replays `prep` from |0><0| once per setting, appends the analysis pulses
/// (realized with `opt.analysis_style`) and reads out.
inline TomographyResult tomography(const SequenceProgram& prep, const Setup* setup,
                                   const TomographyOptions& opt = {}) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(opt.settings.size()));
  const Matrix3c start = DensityMatrix::basis(kZeroLevel).matrix();
  for (std::size_t k = 0; k < opt.settings.size(); ++k) {
    SequenceProgram full = prep;
    for (const PulseSpec& p : opt.settings[k].analysis) {
      full.steps.emplace_back(opt.analysis_style.make(p.transition, p.tip_angle, p.phase));
    }
    y(static_cast<Eigen::Index>(k)) =
        population_signal(pulse::evolve(start, full, setup), opt.settings[k].readout, opt.readout);
  }
  return reconstruct(y, opt);
}

inline TomographyResult tomography(const SequenceProgram& prep, const pulse::SpinSystem& sys,
                                   const pulse::LabTensor& lab,
                                   const std::optional<RelaxationParams>& relaxation,
                                   TomographyOptions opt = {}) {
  SequenceProgram prog = prep;
  prog.relaxation = relaxation;
  opt.readout.relaxation = relaxation;
  const Setup setup{sys, lab};
  return tomography(prog, &setup, opt);
}

/// Tomography of a state injected directly, bypassing preparation.
inline TomographyResult tomography_of_state(const DensityMatrix& rho, const Setup* setup,
                                            const TomographyOptions& opt = {}) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(opt.settings.size()));
  for (std::size_t k = 0; k < opt.settings.size(); ++k) {
    Matrix3c state = rho.matrix();
    for (const PulseSpec& p : opt.settings[k].analysis) {
      const Matrix3c u =
          pulse::pulse_propagator(opt.analysis_style.make(p.transition, p.tip_angle, p.phase), setup);
      state = u * state * u.adjoint();
    }
    y(static_cast<Eigen::Index>(k)) = population_signal(state, opt.settings[k].readout, opt.readout);
  }
  return reconstruct(y, opt);
}

}  // namespace qutrit::tomo
