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

// Quantum-phase interference patterns M^{0+}(phi+, phi-), their 2D Fourier
// content, and the reading of the phase plane as a map of free evolution
// (TPPI time axes, evolution traces, closure of paths on the phase torus).
//
// Phase-to-time convention: phi = 2 pi Delta f t, Delta f in MHz, t in us.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qutrit/prep_tomo.hpp"

namespace qutrit::phase {

using pulse::PulseStyle;
using pulse::RelaxationParams;
using pulse::Setup;
using pulse::Transition;
using tomo::TargetState;

inline constexpr std::size_t kDefaultGrid = 64;

/// N x N grid of M^{0+}; row index samples phi+, column index phi-, both
/// uniformly over [0, 2 pi).
class PhasePattern {
 public:
  PhasePattern(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (n < 8 || (n & (n - 1)) != 0) {
      throw Error(ErrorCode::kConfiguration, "pattern grid must be a power of two >= 8");
    }
    if (values_.size() != n * n) {
      throw Error(ErrorCode::kConfiguration, "pattern value count does not match grid");
    }
    for (double v : values_) {
      if (!(v >= -1.0 && v <= 1.0)) {
        throw Error(ErrorCode::kInvalidState, "pattern entries must lie in [-1, 1]");
      }
    }
  }

  std::size_t size() const { return n_; }
  double phase(std::size_t index) const {
    return kTwoPi * static_cast<double>(index) / static_cast<double>(n_);
  }
  double operator()(std::size_t i_plus, std::size_t j_minus) const {
    return values_[i_plus * n_ + j_minus];
  }
  const std::vector<double>& values() const { return values_; }

  /// Bilinear interpolation with periodic wrap in both phases.
  double interpolate(double phi_plus, double phi_minus) const {
    const double step = kTwoPi / static_cast<double>(n_);
    const double u = wrap_angle(phi_plus) / step;
    const double v = wrap_angle(phi_minus) / step;
    const auto i0 = static_cast<std::size_t>(std::floor(u)) % n_;
    const auto j0 = static_cast<std::size_t>(std::floor(v)) % n_;
    const std::size_t i1 = (i0 + 1) % n_;
    const std::size_t j1 = (j0 + 1) % n_;
    const double fu = u - std::floor(u);
    const double fv = v - std::floor(v);
    return (1 - fu) * (1 - fv) * (*this)(i0, j0) + fu * (1 - fv) * (*this)(i1, j0) +
           (1 - fu) * fv * (*this)(i0, j1) + fu * fv * (*this)(i1, j1);
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct InterferenceOptions {
  PulseStyle pulses = PulseStyle::ideal();
  std::optional<Setup> setup;                   // required for FINITE pulses
  std::optional<RelaxationParams> relaxation;   // applied during the readout delay
  std::optional<NoiseSpec> noise;
};

/// Preparation with phase shifts (phi+, phi-), then the reversion pulses:
/// same transitions at the unshifted phases, negated tips, reverse order.
inline pulse::SequenceProgram interference_program(TargetState state, double phi_plus,
                                                   double phi_minus, const PulseStyle& style,
                                                   std::optional<RelaxationParams> relaxation = {}) {
  const auto pulses = tomo::preparation_pulses(state);
  pulse::SequenceProgram prog;
  for (const auto& p : pulses) {
    const double shift = p.transition == Transition::kPlus ? phi_plus : phi_minus;
    prog.steps.emplace_back(style.make(p.transition, p.tip, p.base_phase + shift));
  }
  for (auto it = pulses.rbegin(); it != pulses.rend(); ++it) {
    prog.steps.emplace_back(style.make(it->transition, -it->tip, it->base_phase));
  }
  prog.relaxation = relaxation;
  return prog;
}

inline tomo::Readout interference_readout(const std::optional<RelaxationParams>& relaxation) {
  return {tomo::kReadoutDelayUs, relaxation, 1.0};
}

/// Simulated M^{0+} over the phase grid. Each preparation pulse depends on a
/// single phase axis, so its propagator is built once per axis value and the
/// cells are products of cached propagators.
inline PhasePattern interference_pattern(TargetState state, std::size_t n,
                                         const InterferenceOptions& opt = {}) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::kConfiguration, "pattern grid must be a power of two >= 8");
  }
  const Setup* setup = opt.setup ? &*opt.setup : nullptr;
  const auto pulses = tomo::preparation_pulses(state);
  auto propagator = [&](const tomo::PreparationPulse& p, double tip, double phase) {
    return pulse::pulse_propagator(opt.pulses.make(p.transition, tip, phase), setup);
  };
  const double step = kTwoPi / static_cast<double>(n);

  std::vector<Matrix3c> first(n), second(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double shift = step * static_cast<double>(k);
    first[k] = propagator(pulses[0], pulses[0].tip, pulses[0].base_phase + shift);
    second[k] = propagator(pulses[1], pulses[1].tip, pulses[1].base_phase + shift);
  }
  const Matrix3c reversion = propagator(pulses[0], -pulses[0].tip, pulses[0].base_phase) *
                             propagator(pulses[1], -pulses[1].tip, pulses[1].base_phase);
  // PLUS is always the first preparation pulse; it carries phi+.
  const auto& plus_axis = first;
  const auto& minus_axis = second;

  const tomo::Readout readout = interference_readout(opt.relaxation);
  const Vector3c zero = Vector3c::Unit(kZeroLevel);
  std::vector<double> values(n * n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vector3c psi = reversion * minus_axis[j] * plus_axis[static_cast<std::size_t>(i)] * zero;
      values[static_cast<std::size_t>(i) * n + j] =
          tomo::population_signal(psi * psi.adjoint(), Transition::kPlus, readout);
    }
  }

  if (opt.noise && opt.noise->sigma > 0.0) {
    std::mt19937_64 rng(opt.noise->seed);
    std::normal_distribution<double> gauss(0.0, opt.noise->sigma);
    for (double& v : values) v = std::clamp(v + gauss(rng), -1.0, 1.0);
  }
  return PhasePattern(n, std::move(values));
}

/// psi1: -cos(phi+ + phi-)/2.
/// psi2: -(4/9) cos phi+ - (1/9) cos phi- - (4/9) cos(phi+ + phi-).
inline double analytic_value(TargetState state, double phi_plus, double phi_minus) {
  if (state == TargetState::kPsi1) return -0.5 * std::cos(phi_plus + phi_minus);
  return -4.0 / 9.0 * std::cos(phi_plus) - 1.0 / 9.0 * std::cos(phi_minus) -
         4.0 / 9.0 * std::cos(phi_plus + phi_minus);
}

inline PhasePattern analytic_pattern(TargetState state, std::size_t n) {
  std::vector<double> values(n * n);
  const double step = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] =
          analytic_value(state, step * static_cast<double>(i), step * static_cast<double>(j));
    }
  }
  return PhasePattern(n, std::move(values));
}

/// Mean removed, then scaled so the largest |value| is 1.
inline std::vector<double> normalized_values(const PhasePattern& p) {
  std::vector<double> v = p.values();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double peak = 0.0;
  for (double& x : v) {
    x -= mean;
    peak = std::max(peak, std::abs(x));
  }
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Fourier content

struct FourierPeaks {
  std::map<std::pair<int, int>, double> entries;  // (k+, k-) -> normalized |F|

  double magnitude(int k_plus, int k_minus) const {
    const auto it = entries.find({k_plus, k_minus});
    return it == entries.end() ? 0.0 : it->second;
  }
};

/// Full 2D DFT magnitudes, indexed [k+][k-] with FFT bin order.
inline std::vector<std::vector<double>> dft_magnitudes(const PhasePattern& p) {
  const std::size_t n = p.size();
  Eigen::FFT<double> fft;
  std::vector<std::vector<std::complex<double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::complex<double>> in(n), out;
    for (std::size_t j = 0; j < n; ++j) in[j] = p(i, j);
    fft.fwd(out, in);
    rows[i] = std::move(out);
  }
  std::vector<std::vector<double>> mag(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::complex<double>> in(n), out;
    for (std::size_t i = 0; i < n; ++i) in[i] = rows[i][j];
    fft.fwd(out, in);
    for (std::size_t i = 0; i < n; ++i) mag[i][j] = std::abs(out[i]);
  }
  return mag;
}

inline int signed_frequency(std::size_t bin, std::size_t n) {
  const auto k = static_cast<int>(bin);
  return bin <= n / 2 ? k : k - static_cast<int>(n);
}

/// Integer-frequency bins whose magnitude, relative to the largest bin, is at
/// least `threshold`. The pattern is transformed as given (no mean removal).
inline FourierPeaks fourier_peaks(const PhasePattern& p, double threshold) {
  const auto mag = dft_magnitudes(p);
  const std::size_t n = p.size();
  double largest = 0.0;
  for (const auto& row : mag) {
    for (double m : row) largest = std::max(largest, m);
  }
  FourierPeaks out;
  if (largest == 0.0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = mag[i][j] / largest;
      if (m >= threshold) out.entries[{signed_frequency(i, n), signed_frequency(j, n)}] = m;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evolution map

/// Offsets of the two drives from f0. Bound to a spin system they satisfy
/// Delta f+ + Delta f- = -3 D_zz.
struct EvolutionSchedule {
  double delta_f_plus = 0.0;   // MHz
  double delta_f_minus = 0.0;  // MHz

  static EvolutionSchedule from_ratio(double ratio, double sum_mhz) {
    if (!std::isfinite(ratio) || ratio == -1.0) {
      throw Error(ErrorCode::kConfiguration, "ratio must be finite and != -1");
    }
    const double minus = sum_mhz / (1.0 + ratio);
    return {ratio * minus, minus};
  }

  /// Schedule addressing the molecules with lab-frame D_zz.
  static EvolutionSchedule bound(double d_zz_mhz, double ratio) {
    return from_ratio(ratio, -3.0 * d_zz_mhz);
  }

  static EvolutionSchedule from_system(const spin::SpinSystem& sys) {
    return {sys.delta_f_plus(), sys.delta_f_minus()};
  }

  double ratio() const {
    if (delta_f_minus == 0.0) throw Error(ErrorCode::kRemapUndefined, "Delta f- is zero");
    return delta_f_plus / delta_f_minus;
  }
  double theta_mix() const { return std::atan(ratio()); }
};

/// Pattern values on the fictitious-evolution time axes
/// t0+ = +phi+ / (2 pi Delta f+), t0- = -phi- / (2 pi Delta f-).
struct TimeGrid {
  std::vector<double> t_plus_us;
  std::vector<double> t_minus_us;
  std::vector<double> values;  // row-major, same layout as the pattern
};

inline TimeGrid tppi_remap(const PhasePattern& p, const EvolutionSchedule& s) {
  if (s.delta_f_plus == 0.0 || s.delta_f_minus == 0.0) {
    throw Error(ErrorCode::kRemapUndefined, "TPPI remap needs nonzero Delta f+ and Delta f-");
  }
  TimeGrid g;
  for (std::size_t k = 0; k < p.size(); ++k) {
    g.t_plus_us.push_back(p.phase(k) / (kTwoPi * s.delta_f_plus));
    g.t_minus_us.push_back(-p.phase(k) / (kTwoPi * s.delta_f_minus));
  }
  g.values = p.values();
  return g;
}

/// Pulse-phase coordinates reached by free evolution for time t in the
/// frame rotating at f0. |+> and |-> pick up exp(+i 2 pi Delta f+- t); with
/// the per-transition phase sign this reads (phi+, phi-) =
/// (-2 pi Delta f+ t, +2 pi Delta f- t), the t0+ = t0- diagonal of the
/// TPPI grid.
inline std::pair<double, double> evolution_phases(const EvolutionSchedule& s, double t_us) {
  return {-kTwoPi * s.delta_f_plus * t_us, kTwoPi * s.delta_f_minus * t_us};
}

struct TracePoint {
  double t_us;
  double m0plus;
};

inline std::vector<TracePoint> evolution_trace(const PhasePattern& p, const EvolutionSchedule& s,
                                               double t_max_us, std::size_t n_samples) {
  if (n_samples < 2) throw Error(ErrorCode::kConfiguration, "trace needs >= 2 samples");
  std::vector<TracePoint> out;
  out.reserve(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = t_max_us * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    const auto [phi_plus, phi_minus] = evolution_phases(s, t);
    out.push_back({t, p.interpolate(phi_plus, phi_minus)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Torus

inline constexpr std::int64_t kDenominatorCap = 1'000'000;
inline constexpr double kClosureTolerance = 1e-9;

struct Rational {
  std::int64_t p;
  std::int64_t q;
};

/// Continued-fraction convergents of x up to denominator `cap`; accepts the
/// first convergent p/q whose closure mismatch q|x - p/q| (in turns) is
/// within `tolerance`.
inline std::optional<Rational> rationalize(double x, std::int64_t cap = kDenominatorCap,
                                           double tolerance = kClosureTolerance) {
  if (!std::isfinite(x)) return std::nullopt;
  const double ax = std::abs(x);
  const std::int64_t sign = x < 0 ? -1 : 1;
  std::int64_t h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  double r = ax;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(r);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > cap) break;
    if (static_cast<double>(k) * std::abs(ax - static_cast<double>(h) / static_cast<double>(k)) <=
        tolerance) {
      return Rational{sign * h, k};
    }
    const double frac = r - a_real;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

struct TorusPoint {
  double t_us;
  double phi1;  // phase on |+>, wrapped to [0, 2 pi)
  double phi2;  // phase on |->
};

struct ClosureReport {
  bool closed = false;
  std::int64_t winding_plus = 0;   // p in Delta f+ / Delta f- = p/q
  std::int64_t winding_minus = 0;  // q
  double closure_time_us = 0.0;
  std::int64_t windings_examined = 0;   // full turns of phi2 within t_max
  double min_return_distance = 0.0;     // rad, over those turns
};

struct TorusPath {
  std::vector<TorusPoint> points;
  ClosureReport closure;
};

/// Closest approach of phi1 to 0 at the instants phi2 completes a turn.
inline double min_return_distance(double ratio, std::int64_t windings) {
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n <= windings; ++n) {
    const double turns = static_cast<double>(n) * ratio;
    const double frac = std::abs(turns - std::round(turns));
    best = std::min(best, kTwoPi * frac);
  }
  return best;
}

inline TorusPath torus_path(const EvolutionSchedule& s, double t_max_us,
                            std::size_t n_samples = 2001) {
  if (!(t_max_us > 0.0)) throw Error(ErrorCode::kConfiguration, "t_max must be positive");
  if (n_samples < 2) throw Error(ErrorCode::kConfiguration, "path needs >= 2 samples");
  TorusPath path;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = t_max_us * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    path.points.push_back({t, wrap_angle(kTwoPi * s.delta_f_plus * t),
                           wrap_angle(kTwoPi * s.delta_f_minus * t)});
  }

  const double ratio = s.ratio();
  ClosureReport& c = path.closure;
  c.windings_examined = static_cast<std::int64_t>(std::floor(t_max_us * std::abs(s.delta_f_minus)));
  if (const auto r = rationalize(ratio)) {
    c.closed = true;
    c.winding_plus = r->p;
    c.winding_minus = r->q;
    c.closure_time_us = static_cast<double>(r->q) / std::abs(s.delta_f_minus);
  }
  c.min_return_distance =
      c.windings_examined > 0 ? min_return_distance(ratio, c.windings_examined)
                              : std::numeric_limits<double>::infinity();
  return path;
}

struct EngineeredEvolution {
  double delta_f_plus;   // MHz
  double delta_f_minus;  // MHz
  double t_us;
};

/// Offsets and waiting time that give |+> and |-> the phases phi1, phi2
/// (relative to |0>) while keeping Delta f+ + Delta f- = -3 D_zz.
inline EngineeredEvolution phase_engineering(double phi1, double phi2, double d_zz_mhz) {
  const double sum = phi1 + phi2;
  if (sum == 0.0) {
    throw Error(ErrorCode::kDegenerateEngineering, "phi1 + phi2 = 0 has no engineering solution");
  }
  if (d_zz_mhz == 0.0) throw Error(ErrorCode::kConfiguration, "D_zz must be nonzero");
  return {-3.0 * d_zz_mhz * phi1 / sum, -3.0 * d_zz_mhz * phi2 / sum,
          -sum / (kTwoPi * 3.0 * d_zz_mhz)};
}

}  // namespace qutrit::phase
