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

#include "qutrit/interference.hpp"

#include <random>

#include "gtest/gtest.h"

#include "test_util.h"

using namespace qutrit;
using namespace qutrit::phase;
using tomo::TargetState;

namespace {

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

PhasePattern from_function(std::size_t n, auto f) {
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      v[i * n + j] = f(kTwoPi * static_cast<double>(i) / static_cast<double>(n),
                       kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  return PhasePattern(n, std::move(v));
}

}  // namespace

TEST(interference, pattern_validation) {
  EXPECT_EQ(test_util::error_code_of([] { PhasePattern(12, std::vector<double>(144, 0.0)); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(test_util::error_code_of([] { PhasePattern(4, std::vector<double>(16, 0.0)); }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(test_util::error_code_of([] { PhasePattern(8, std::vector<double>(63, 0.0)); }),
            ErrorCode::kConfiguration);
  std::vector<double> v(64, 0.0);
  v[3] = 1.5;
  EXPECT_EQ(test_util::error_code_of([&] { PhasePattern(8, v); }), ErrorCode::kInvalidState);
}

TEST(interference, zero_shift_returns_to_ground) {
  for (auto s : {TargetState::kPsi1, TargetState::kPsi2}) {
    const auto prog = interference_program(s, 0.0, 0.0, pulse::PulseStyle::ideal());
    const auto rho = pulse::run_sequence(DensityMatrix::basis(kZeroLevel), prog);
    EXPECT_NEAR(rho.population(kZeroLevel), 1.0, 1e-12);
  }
}

TEST(interference, psi1_matches_closed_form) {
  const auto sim = interference_pattern(TargetState::kPsi1, 64);
  const auto ref = analytic_pattern(TargetState::kPsi1, 64);
  EXPECT_LT(max_deviation(sim.values(), ref.values()), 1e-12);
}

TEST(interference, psi2_matches_closed_form_shape) {
  const auto sim = interference_pattern(TargetState::kPsi2, 64);
  const auto ref = analytic_pattern(TargetState::kPsi2, 64);
  EXPECT_LT(max_deviation(normalized_values(sim), normalized_values(ref)), 1e-12);
  // The readout sees half of the closed-form amplitude.
  std::vector<double> half = ref.values();
  for (double& x : half) x *= 0.5;
  EXPECT_LT(max_deviation(sim.values(), half), 1e-12);
}

TEST(interference, cached_pattern_matches_program_replay) {
  const auto sim = interference_pattern(TargetState::kPsi2, 8);
  for (std::size_t i : {0u, 3u, 5u}) {
    for (std::size_t j : {1u, 6u}) {
      const auto prog = interference_program(TargetState::kPsi2, sim.phase(i), sim.phase(j),
                                             pulse::PulseStyle::ideal());
      const Matrix3c rho = pulse::evolve(DensityMatrix::basis(kZeroLevel).matrix(), prog, nullptr);
      const double m = tomo::population_signal(rho, pulse::Transition::kPlus,
                                               interference_readout(std::nullopt));
      EXPECT_NEAR(sim(i, j), m, 1e-13);
    }
  }
}

TEST(interference, psi1_fourier_peaks) {
  const auto peaks = fourier_peaks(interference_pattern(TargetState::kPsi1, 64), 1e-9);
  ASSERT_EQ(peaks.entries.size(), 2u);
  EXPECT_NEAR(peaks.magnitude(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(peaks.magnitude(-1, -1), 1.0, 1e-12);
}

TEST(interference, psi2_fourier_peaks) {
  const auto peaks = fourier_peaks(interference_pattern(TargetState::kPsi2, 64), 1e-9);
  EXPECT_EQ(peaks.entries.size(), 6u);
  const double m10 = peaks.magnitude(1, 0);
  EXPECT_NEAR(peaks.magnitude(0, 1) / m10, 0.25, 1e-12);
  EXPECT_NEAR(peaks.magnitude(1, 1) / m10, 1.0, 1e-12);
  EXPECT_NEAR(peaks.magnitude(-1, 0), m10, 1e-12);
}

TEST(interference, constant_pattern_peaks_at_origin) {
  const auto peaks = fourier_peaks(from_function(16, [](double, double) { return 0.3; }), 1e-9);
  ASSERT_EQ(peaks.entries.size(), 1u);
  EXPECT_EQ(peaks.entries.begin()->first, std::make_pair(0, 0));
}

TEST(interference, fourier_magnitudes_are_conjugate_symmetric) {
  auto& rng = test_util::shared_rng();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(32 * 32);
    for (double& x : v) x = u(rng);
    const auto mag = dft_magnitudes(PhasePattern(32, v));
    for (std::size_t i = 0; i < 32; ++i) {
      for (std::size_t j = 0; j < 32; ++j) {
        EXPECT_NEAR(mag[i][j], mag[(32 - i) % 32][(32 - j) % 32], 1e-10);
      }
    }
  }
}

TEST(interference, single_harmonic_lands_on_its_bin) {
  const auto p = from_function(32, [](double a, double b) { return 0.5 * std::cos(3 * a - 2 * b); });
  const auto peaks = fourier_peaks(p, 1e-9);
  ASSERT_EQ(peaks.entries.size(), 2u);
  EXPECT_NEAR(peaks.magnitude(3, -2), 1.0, 1e-12);
  EXPECT_NEAR(peaks.magnitude(-3, 2), 1.0, 1e-12);
}

TEST(interference, finite_pulses_keep_the_peak_set) {
  InterferenceOptions opt;
  opt.pulses = pulse::PulseStyle::finite(5.0);
  opt.setup = pulse::Setup{spin::OperatingPoint::system(), spin::OperatingPoint::lab_tensor()};
  opt.relaxation = pulse::RelaxationParams::reported();
  const auto peaks = fourier_peaks(interference_pattern(TargetState::kPsi2, 32, opt), 0.0);
  const double m10 = peaks.magnitude(1, 0);
  EXPECT_NEAR(peaks.magnitude(1, 1) / m10, 1.0, 0.1);
  EXPECT_NEAR(peaks.magnitude(0, 1) / m10, 0.25, 0.025);
}

TEST(interference, noise_is_seeded) {
  InterferenceOptions a;
  a.noise = NoiseSpec{0.01, 42};
  InterferenceOptions b = a;
  InterferenceOptions c = a;
  c.noise->seed = 43;
  const auto pa = interference_pattern(TargetState::kPsi1, 16, a);
  EXPECT_EQ(pa.values(), interference_pattern(TargetState::kPsi1, 16, b).values());
  EXPECT_NE(pa.values(), interference_pattern(TargetState::kPsi1, 16, c).values());
  const auto clean = interference_pattern(TargetState::kPsi1, 16);
  EXPECT_LT(max_deviation(pa.values(), clean.values()), 0.1);
}

TEST(interference, interpolation_hits_grid_and_wraps) {
  const auto p = analytic_pattern(TargetState::kPsi2, 16);
  EXPECT_NEAR(p.interpolate(p.phase(3), p.phase(7)), p(3, 7), 1e-14);
  EXPECT_NEAR(p.interpolate(p.phase(3) + kTwoPi, p.phase(7) - 2 * kTwoPi), p(3, 7), 1e-12);
}

TEST(interference, schedule_from_ratio) {
  const auto s = EvolutionSchedule::from_ratio(0.5, 180.0);
  EXPECT_DOUBLE_EQ(s.delta_f_minus, 120.0);
  EXPECT_DOUBLE_EQ(s.delta_f_plus, 60.0);
  EXPECT_DOUBLE_EQ(s.ratio(), 0.5);
  EXPECT_NEAR(EvolutionSchedule::from_ratio(1.0, 180.0).theta_mix(), kPi / 4.0, 1e-15);
  const auto b = EvolutionSchedule::bound(-60.0, 2.0);
  EXPECT_NEAR(b.delta_f_plus + b.delta_f_minus, 180.0, 1e-12);
  EXPECT_EQ(test_util::error_code_of([] { EvolutionSchedule::from_ratio(-1.0, 180.0); }),
            ErrorCode::kConfiguration);
}

TEST(interference, tppi_axes) {
  const auto p = analytic_pattern(TargetState::kPsi2, 16);
  const EvolutionSchedule s{90.0, 90.0};
  const TimeGrid g = tppi_remap(p, s);
  ASSERT_EQ(g.t_plus_us.size(), 16u);
  EXPECT_NEAR(g.t_plus_us[4], (kPi / 2.0) / (kTwoPi * 90.0), 1e-15);
  EXPECT_NEAR(g.t_minus_us[4], -(kPi / 2.0) / (kTwoPi * 90.0), 1e-15);
  EXPECT_EQ(g.values, p.values());
  EXPECT_EQ(test_util::error_code_of([&] { tppi_remap(p, EvolutionSchedule{0.0, 90.0}); }),
            ErrorCode::kRemapUndefined);
}

TEST(interference, evolution_trace_follows_free_precession) {
  const auto p = analytic_pattern(TargetState::kPsi1, 64);
  const EvolutionSchedule s{87.0, 91.0};
  const auto trace = evolution_trace(p, s, 0.05, 11);
  ASSERT_EQ(trace.size(), 11u);
  EXPECT_NEAR(trace.front().m0plus, p(0, 0), 1e-15);
  for (const auto& pt : trace) {
    const auto [a, b] = evolution_phases(s, pt.t_us);
    EXPECT_NEAR(pt.m0plus, p.interpolate(a, b), 1e-15);
    // psi1 depends only on phi+ + phi-, which advances at 2 pi (Df- - Df+).
    EXPECT_NEAR(pt.m0plus, -0.5 * std::cos(kTwoPi * (s.delta_f_minus - s.delta_f_plus) * pt.t_us),
                0.01);
  }
}

TEST(interference, rationalize_convergents) {
  auto check = [](double x, std::int64_t p, std::int64_t q) {
    const auto r = rationalize(x);
    ASSERT_TRUE(r.has_value()) << x;
    EXPECT_EQ(r->p, p);
    EXPECT_EQ(r->q, q);
  };
  check(1.0, 1, 1);
  check(0.5, 1, 2);
  check(2.0, 2, 1);
  check(0.75, 3, 4);
  check(-1.5, -3, 2);
  check(355.0 / 113.0, 355, 113);
  EXPECT_FALSE(rationalize(std::sqrt(2.0)).has_value());
  EXPECT_FALSE(rationalize(kPi).has_value());
}

TEST(interference, torus_closure_windings) {
  for (auto [ratio, p, q] : {std::tuple{1.0, 1, 1}, {0.5, 1, 2}, {2.0, 2, 1}}) {
    const auto s = EvolutionSchedule::from_ratio(ratio, 180.0);
    const TorusPath path = torus_path(s, 1.0);
    EXPECT_TRUE(path.closure.closed);
    EXPECT_EQ(path.closure.winding_plus, p);
    EXPECT_EQ(path.closure.winding_minus, q);
    EXPECT_NEAR(path.closure.closure_time_us, q / s.delta_f_minus, 1e-15);
  }
}

TEST(interference, torus_incommensurate) {
  const auto s = EvolutionSchedule::from_ratio(std::sqrt(2.0), 180.0);
  const double t_max = 200.0 / s.delta_f_minus + 1e-9;
  const TorusPath path = torus_path(s, t_max);
  EXPECT_FALSE(path.closure.closed);
  EXPECT_EQ(path.closure.windings_examined, 200);
  EXPECT_GT(path.closure.min_return_distance, 0.0);
}

TEST(interference, torus_points_are_wrapped) {
  const TorusPath path = torus_path(EvolutionSchedule{87.3, 90.7}, 0.2, 501);
  for (const auto& pt : path.points) {
    EXPECT_GE(pt.phi1, 0.0);
    EXPECT_LT(pt.phi1, kTwoPi);
    EXPECT_GE(pt.phi2, 0.0);
    EXPECT_LT(pt.phi2, kTwoPi);
  }
}

TEST(interference, phase_engineering_round_trip) {
  auto& rng = test_util::shared_rng();
  std::uniform_real_distribution<double> phase(-20.0, 20.0);
  std::uniform_real_distribution<double> dzz(-101.0, 101.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double p1 = phase(rng), p2 = phase(rng), d = dzz(rng);
    if (std::abs(p1 + p2) < 1e-3 || std::abs(d) < 1e-3) continue;
    const auto e = phase_engineering(p1, p2, d);
    EXPECT_NEAR(kTwoPi * e.delta_f_plus * e.t_us, p1, 1e-12 * std::max(1.0, std::abs(p1)));
    EXPECT_NEAR(kTwoPi * e.delta_f_minus * e.t_us, p2, 1e-12 * std::max(1.0, std::abs(p2)));
    // Each offset carries phi/(phi1 + phi2), so rounding grows with the cancellation.
    const double gain = (std::abs(p1) + std::abs(p2)) / std::abs(p1 + p2);
    EXPECT_NEAR(e.delta_f_plus + e.delta_f_minus, -3.0 * d, 1e-12 * gain * std::abs(3.0 * d));
  }
}

TEST(interference, phase_engineering_degenerate) {
  EXPECT_EQ(test_util::error_code_of([] { phase_engineering(1.0, -1.0, -60.0); }),
            ErrorCode::kDegenerateEngineering);
}
