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

// Transition-selective pulses, free evolution and phenomenological T1/T2
// relaxation acting on a single qutrit density matrix.
//
// Pulses are expressed in the drive frame: |+> rotates against |0> at f+,
// |-> against |0> at -f-. In that frame an ideal pulse is
//   U = exp(-i tip/2 (e^{i s phase} |0><t| + h.c.)),
// with s = +1 on the 0<->+ transition and s = -1 on 0<->- (|0> is the upper
// level of the 0<->- pair). Delays only evolve under the residual detuning
// between drive and transition frequencies.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qutrit/density.hpp"
#include "qutrit/spin_core.hpp"

namespace qutrit::pulse {

using spin::LabTensor;
using spin::SpinSystem;

enum class Transition { kPlus, kMinus };

struct IdealModel {};

struct FiniteModel {
  double duration_us = 0.0;
  double rabi_mhz = 0.0;
};

using PulseModel = std::variant<IdealModel, FiniteModel>;

struct PulseSpec {
  Transition transition = Transition::kPlus;
  double tip_angle = 0.0;  // rad; negative reverses the rotation
  double phase = 0.0;      // rad
  PulseModel model = IdealModel{};

  static PulseSpec ideal(Transition t, double tip, double phase) {
    return {t, tip, phase, IdealModel{}};
  }

  /// Square pulse of constant amplitude; duration follows tip = 2 pi rabi T.
  static PulseSpec finite(Transition t, double tip, double phase, double rabi_mhz) {
    if (!(rabi_mhz > 0.0)) {
      throw Error(ErrorCode::kConfiguration, "finite pulse needs a positive Rabi frequency");
    }
    PulseSpec p{t, tip, phase, FiniteModel{std::abs(tip) / (kTwoPi * rabi_mhz), rabi_mhz}};
    p.validate();
    return p;
  }

  bool is_finite() const { return std::holds_alternative<FiniteModel>(model); }

  void validate() const {
    if (!std::isfinite(tip_angle) || !std::isfinite(phase)) {
      throw Error(ErrorCode::kConfiguration, "pulse angles must be finite");
    }
    if (const auto* f = std::get_if<FiniteModel>(&model)) {
      if (!(f->duration_us > 0.0) || !std::isfinite(f->duration_us)) {
        throw Error(ErrorCode::kConfiguration, "finite pulse duration must be positive");
      }
      if (!(f->rabi_mhz >= 0.0)) {
        throw Error(ErrorCode::kConfiguration, "Rabi frequency must be non-negative");
      }
      if (std::abs(kTwoPi * f->rabi_mhz * f->duration_us - std::abs(tip_angle)) > 1e-6) {
        throw Error(ErrorCode::kConfiguration,
                    "finite pulse tip angle inconsistent with 2 pi rabi duration");
      }
    }
  }
};

/// How pulses of a program are realized: ideal rotations, or square finite
/// pulses at a fixed Rabi frequency.
struct PulseStyle {
  std::optional<double> rabi_mhz;

  static PulseStyle ideal() { return {}; }
  static PulseStyle finite(double rabi_mhz) { return {rabi_mhz}; }

  bool is_finite() const { return rabi_mhz.has_value(); }

  PulseSpec make(Transition t, double tip, double phase) const {
    return rabi_mhz ? PulseSpec::finite(t, tip, phase, *rabi_mhz)
                    : PulseSpec::ideal(t, tip, phase);
  }
};

struct RelaxationParams {
  double t1_us = 0.0;
  double t2_us = 0.0;

  /// Photoexcited C70 triplet: T1 = 10.7 ms, T2 = 9.4 us.
  static RelaxationParams reported() { return {10700.0, 9.4}; }

  void validate() const {
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) {
      throw Error(ErrorCode::kConfiguration, "T1 and T2 must be positive");
    }
    if (t2_us > 2.0 * t1_us) {
      throw Error(ErrorCode::kConfiguration, "T2 must not exceed 2 T1");
    }
  }
};

struct Delay {
  double duration_us = 0.0;
};

using Step = std::variant<PulseSpec, Delay>;

struct SequenceProgram {
  std::vector<Step> steps;
  std::optional<RelaxationParams> relaxation;

  void validate() const {
    if (steps.empty()) throw Error(ErrorCode::kConfiguration, "sequence program is empty");
    for (const Step& step : steps) {
      if (const auto* d = std::get_if<Delay>(&step)) {
        if (!std::isfinite(d->duration_us) || d->duration_us < 0.0) {
          throw Error(ErrorCode::kConfiguration, "delay durations must be finite and >= 0");
        }
      } else {
        std::get<PulseSpec>(step).validate();
      }
    }
    if (relaxation) relaxation->validate();
  }
};

/// e^{i s phase}|0><t| + h.c. (s = +1 for kPlus, -1 for kMinus).
inline Matrix3c transition_generator(Transition t, double phase) {
  Matrix3c g = Matrix3c::Zero();
  if (t == Transition::kPlus) {
    g(kZeroLevel, kPlusLevel) = std::exp(kI * phase);
  } else {
    g(kZeroLevel, kMinusLevel) = std::exp(-kI * phase);
  }
  return g + g.adjoint();
}

inline Matrix3c ideal_rotation(Transition t, double tip, double phase) {
  return unitary_exp(transition_generator(t, phase), 0.5 * tip);
}

inline constexpr double kMaxStepPhase = 0.05;         // rad per integration step
inline constexpr std::size_t kMaxSteps = 10'000'000;  // per pulse

struct FinitePropagator {
  Matrix3c rotating_frame;  // frame rotating at f0
  Matrix3c drive_frame;     // same propagator seen from the drive frame
  std::size_t steps = 0;
  double duration_us = 0.0;
};

/// Diagonal Hamiltonian (rad/us) of the labeled levels in the frame rotating
/// at f0, relative to E(|0>).
inline Matrix3c rotating_frame_levels(const SpinSystem& sys, const LabTensor& lab) {
  const spin::TransitionFrequencies tf = spin::transition_frequencies(spin::hamiltonian(sys, lab));
  Matrix3c h0 = Matrix3c::Zero();
  h0(kPlusLevel, kPlusLevel) = kTwoPi * (tf.plus - sys.f0());
  h0(kMinusLevel, kMinusLevel) = kTwoPi * (sys.f0() - tf.minus);
  return h0;
}

/// Frame of the two drive tones, relative to the f0 frame (rad/us).
inline Matrix3c drive_frame_levels(const SpinSystem& sys) {
  Matrix3c hf = Matrix3c::Zero();
  hf(kPlusLevel, kPlusLevel) = kTwoPi * (sys.f_plus() - sys.f0());
  hf(kMinusLevel, kMinusLevel) = kTwoPi * (sys.f0() - sys.f_minus());
  return hf;
}

/// Time-ordered midpoint product of exp(-i H(t) dt) for a square pulse at
/// the addressed transition's drive frequency. The drive couples both allowed
/// transitions (the microwave field does not know which one is addressed),
/// so off-resonant leakage into the spectator pair is retained.
inline FinitePropagator finite_pulse_propagator(const SpinSystem& sys, const LabTensor& lab,
                                                const PulseSpec& p) {
  const auto* model = std::get_if<FiniteModel>(&p.model);
  if (model == nullptr) {
    throw Error(ErrorCode::kConfiguration, "finite_pulse_propagator needs a FINITE pulse");
  }
  p.validate();

  const Matrix3c h0 = rotating_frame_levels(sys, lab);
  const double drive_offset =
      (p.transition == Transition::kPlus ? sys.f_plus() : sys.f_minus()) - sys.f0();
  const double amplitude = kPi * model->rabi_mhz * (p.tip_angle < 0.0 ? -1.0 : 1.0);
  const double tau = model->duration_us;

  // Entry magnitudes are time independent, so the Frobenius norm is too.
  const double norm = std::sqrt(h0.cwiseAbs2().sum() + 4.0 * amplitude * amplitude);
  const double wanted = std::ceil(norm * tau / kMaxStepPhase);
  if (!(wanted <= static_cast<double>(kMaxSteps))) {
    throw Error(ErrorCode::kConfiguration,
                "finite pulse needs more than 1e7 integration steps");
  }
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(wanted));
  const double dt = tau / static_cast<double>(n);

  Matrix3c u = Matrix3c::Identity();
  Matrix3c h = h0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    const Complex e = amplitude * std::exp(-kI * (kTwoPi * drive_offset * t + p.phase));
    h(kPlusLevel, kZeroLevel) = e;
    h(kZeroLevel, kMinusLevel) = e;
    h(kZeroLevel, kPlusLevel) = std::conj(e);
    h(kMinusLevel, kZeroLevel) = std::conj(e);
    u = unitary_exp(h, dt) * u;
  }

  FinitePropagator out;
  out.rotating_frame = u;
  out.drive_frame = unitary_exp(drive_frame_levels(sys), -tau) * u;
  out.steps = n;
  out.duration_us = tau;
  return out;
}

/// Linear T1/T2 map: coherences decay with exp(-t/T2), populations level
/// toward Tr(rho)/3 with exp(-t/T1). Valid for traceless inputs too.
inline Matrix3c relax(const Matrix3c& rho, double t_us, const RelaxationParams& r) {
  if (t_us < 0.0) throw Error(ErrorCode::kConfiguration, "relaxation time must be >= 0");
  const double a = std::exp(-t_us / r.t1_us);
  const double b = std::exp(-t_us / r.t2_us);
  const Complex mean = rho.trace() / 3.0;
  Matrix3c out = b * rho;
  for (int k = 0; k < 3; ++k) out(k, k) = a * rho(k, k) + (1.0 - a) * mean;
  return out;
}

inline DensityMatrix apply_relaxation(const DensityMatrix& rho, double t_us,
                                      const RelaxationParams& r) {
  r.validate();
  return DensityMatrix(relax(rho.matrix(), t_us, r), rho.psd_tolerance());
}

/// Spin system context needed by FINITE pulses and detuned delays.
struct Setup {
  SpinSystem system;
  LabTensor lab;
  bool relax_during_pulses = false;
};

/// Residual detuning Hamiltonian in the drive frame; zero when the drives
/// sit exactly on the transitions.
inline Matrix3c detuning_hamiltonian(const Setup& setup) {
  return rotating_frame_levels(setup.system, setup.lab) - drive_frame_levels(setup.system);
}

/// Drive-frame propagator of one pulse.
inline Matrix3c pulse_propagator(const PulseSpec& p, const Setup* setup) {
  if (!p.is_finite()) return ideal_rotation(p.transition, p.tip_angle, p.phase);
  if (setup == nullptr) {
    throw Error(ErrorCode::kConfiguration, "FINITE pulses need a spin system and tensor");
  }
  return finite_pulse_propagator(setup->system, setup->lab, p).drive_frame;
}

/// Left-to-right fold of the program over a (possibly traceless) operator.
/// Linear in `rho`.
inline Matrix3c evolve(const Matrix3c& rho0, const SequenceProgram& prog, const Setup* setup) {
  prog.validate();
  std::optional<Matrix3c> detuning;
  if (setup != nullptr) detuning = detuning_hamiltonian(*setup);

  Matrix3c rho = rho0;
  for (const Step& step : prog.steps) {
    if (const auto* pulse = std::get_if<PulseSpec>(&step)) {
      const Matrix3c u = pulse_propagator(*pulse, setup);
      rho = u * rho * u.adjoint();
      if (pulse->is_finite() && setup->relax_during_pulses && prog.relaxation) {
        rho = relax(rho, std::get<FiniteModel>(pulse->model).duration_us, *prog.relaxation);
      }
    } else {
      const double t = std::get<Delay>(step).duration_us;
      if (detuning && t > 0.0) {
        const Matrix3c u = unitary_exp(*detuning, t);
        rho = u * rho * u.adjoint();
      }
      if (prog.relaxation) rho = relax(rho, t, *prog.relaxation);
    }
  }
  return rho;
}

inline DensityMatrix run_sequence(const DensityMatrix& rho0, const SequenceProgram& prog,
                                  const Setup* setup = nullptr) {
  return DensityMatrix(evolve(rho0.matrix(), prog, setup), rho0.psd_tolerance());
}

inline DensityMatrix run_sequence(const DensityMatrix& rho0, const SequenceProgram& prog,
                                  const SpinSystem& sys, const LabTensor& lab) {
  const Setup setup{sys, lab};
  return run_sequence(rho0, prog, &setup);
}

inline std::string_view to_string(Transition t) {
  return t == Transition::kPlus ? "plus" : "minus";
}

}  // namespace qutrit::pulse
