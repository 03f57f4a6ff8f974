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

#include "qutrit/spectrum.hpp"

#include <algorithm>
#include <numeric>

#include "gtest/gtest.h"

#include "test_util.h"

using namespace qutrit;
using namespace qutrit::spectrum;
using spin::OperatingPoint;

namespace {

spin::SpinSystem operating_system() { return OperatingPoint::system(); }

double centre_field() { return spin::resonance_field(OperatingPoint::kF0Mhz, OperatingPoint::kG); }

double peak(const SpectrumResult& s) {
  double m = 0.0;
  for (double x : s.intensity) m = std::max(m, std::abs(x));
  return m;
}

double outer_half_width(const spin::ZfsParameters& zfs) {
  double w = 0.0;
  for (const auto& line : orientation_lines(operating_system(), zfs, 2000)) {
    w = std::max({w, std::abs(line.fields.plus - centre_field()),
                  std::abs(line.fields.minus - centre_field())});
  }
  return w;
}

}  // namespace

TEST(spectrum, sphere_grid_is_uniform) {
  const auto grid = sphere_grid(4000);
  ASSERT_EQ(grid.size(), 4000u);
  Vector3d mean = Vector3d::Zero();
  double zz = 0.0;
  for (const auto& o : grid) {
    const Vector3d n = o.field_direction();
    mean += n;
    zz += n.z() * n.z();
  }
  EXPECT_LT(mean.norm() / 4000.0, 1e-3);
  EXPECT_NEAR(zz / 4000.0, 1.0 / 3.0, 1e-3);
}

TEST(spectrum, resonance_fields_without_zfs_coincide) {
  const auto f = resonance_fields(2.0037, 9250.5, spin::LabTensor());
  EXPECT_NEAR(f.plus, centre_field(), 1e-6);
  EXPECT_NEAR(f.minus, centre_field(), 1e-6);
}

TEST(spectrum, resonance_fields_invert_transition_frequencies) {
  const auto lab = OperatingPoint::lab_tensor();
  const auto f = resonance_fields(OperatingPoint::kG, OperatingPoint::kF0Mhz, lab);
  const auto at_plus = spin::transition_frequencies(spin::hamiltonian(OperatingPoint::kG, f.plus, lab));
  const auto at_minus = spin::transition_frequencies(spin::hamiltonian(OperatingPoint::kG, f.minus, lab));
  EXPECT_NEAR(at_plus.plus, OperatingPoint::kF0Mhz, 1e-6);
  EXPECT_NEAR(at_minus.minus, OperatingPoint::kF0Mhz, 1e-6);
  // D_zz < 0 lowers the 0<->+ line, so it comes into resonance at higher field.
  EXPECT_GT(f.plus, centre_field());
  EXPECT_LT(f.minus, centre_field());
}

TEST(spectrum, zero_zfs_cancels) {
  const auto s = powder_spectrum(operating_system(), {0.0, 0.0}, FieldRange::around(centre_field(), 100.0),
                                 200);
  for (double x : s.intensity) EXPECT_NEAR(x, 0.0, 1e-12);
}

namespace {

double antisymmetry_residual(double scale) {
  spin::ZfsParameters z = OperatingPoint::zfs();
  z.d_mhz *= scale;
  z.e_mhz *= scale;
  const auto s = powder_spectrum(operating_system(), z, FieldRange::around(centre_field(), 150.0, 1201), 5000,
                                 15.0 * scale);
  const std::size_t n = s.field_axis.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(s.intensity[i] + s.intensity[n - 1 - i]));
  }
  return worst / peak(s);
}

}  // namespace

TEST(spectrum, antisymmetry_breaks_only_at_second_order) {
  // Field axis and linewidth scale with D, so the residual measures D/nu alone.
  const double full = antisymmetry_residual(1.0);
  const double half = antisymmetry_residual(0.5);
  EXPECT_NEAR(full / half, 2.0, 0.1);
  EXPECT_LT(antisymmetry_residual(0.1), 0.01);
}

TEST(spectrum, integrates_to_zero) {
  const auto s = powder_spectrum(operating_system(), OperatingPoint::zfs(),
                                 FieldRange::around(centre_field(), 200.0, 2001));
  double total = 0.0, absolute = 0.0;
  for (double x : s.intensity) {
    total += x;
    absolute += std::abs(x);
  }
  EXPECT_LT(std::abs(total), 1e-6 * absolute);
}

TEST(spectrum, grid_refinement_converges) {
  const FieldRange range = FieldRange::around(centre_field(), 150.0, 601);
  const auto coarse = powder_spectrum(operating_system(), OperatingPoint::zfs(), range, 5000);
  const auto fine = powder_spectrum(operating_system(), OperatingPoint::zfs(), range, 20000);
  double sq = 0.0;
  for (std::size_t i = 0; i < coarse.intensity.size(); ++i) {
    sq += std::pow(coarse.intensity[i] - fine.intensity[i], 2);
  }
  EXPECT_LT(std::sqrt(sq / static_cast<double>(coarse.intensity.size())) / peak(fine), 0.01);
}

TEST(spectrum, width_scales_with_d) {
  const double w1 = outer_half_width({-152.0, -50.4});
  const double w2 = outer_half_width({-304.0, -100.8});
  EXPECT_NEAR(w2 / w1, 2.0, 0.02);
}

TEST(spectrum, empty_range_warns) {
  const auto s = powder_spectrum(operating_system(), OperatingPoint::zfs(), {5000.0, 5100.0, 101}, 200);
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("empty"), std::string::npos);
}

TEST(spectrum, input_validation) {
  const auto sys = operating_system();
  EXPECT_EQ(test_util::error_code_of([&] {
              powder_spectrum(sys, OperatingPoint::zfs(), FieldRange::around(3299.0, 100.0), 99);
            }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(test_util::error_code_of([&] {
              powder_spectrum(sys, OperatingPoint::zfs(), {3300.0, 3200.0, 10}, 200);
            }),
            ErrorCode::kConfiguration);
  EXPECT_EQ(test_util::error_code_of([&] {
              orientation_selection(sys, OperatingPoint::zfs(), 3300.0, 3300.0, 200);
            }),
            ErrorCode::kConfiguration);
}

TEST(spectrum, whole_spectrum_window_selects_everything) {
  const auto sel = orientation_selection(operating_system(), OperatingPoint::zfs(), 3000.0, 3600.0, 1000);
  EXPECT_EQ(sel.orientations.size(), 1000u);
  const std::size_t counted =
      std::accumulate(sel.abs_dzz_histogram.begin(), sel.abs_dzz_histogram.end(), std::size_t{0});
  EXPECT_EQ(counted, 1000u);
}

TEST(spectrum, edge_window_selects_extreme_dzz) {
  const double edge = outer_half_width(OperatingPoint::zfs());
  const double c = centre_field();
  const auto sel =
      orientation_selection(operating_system(), OperatingPoint::zfs(), c + edge - 2.0, c + edge + 1.0, 5000);
  ASSERT_FALSE(sel.orientations.empty());
  for (const auto& o : sel.orientations) EXPECT_GT(std::abs(o.dzz_mhz), 95.0);
}

TEST(spectrum, selected_lines_lie_in_window) {
  const double lo = centre_field() + 10.0, hi = centre_field() + 20.0;
  const auto sel = orientation_selection(operating_system(), OperatingPoint::zfs(), lo, hi, 2000);
  const auto principal = spin::build_principal_tensor(OperatingPoint::zfs());
  for (const auto& o : sel.orientations) {
    const auto lab = spin::rotate_to_lab(principal, spin::Orientation(o.theta, o.phi));
    const auto f = resonance_fields(OperatingPoint::kG, OperatingPoint::kF0Mhz, lab);
    EXPECT_TRUE((f.plus >= lo && f.plus <= hi) || (f.minus >= lo && f.minus <= hi));
  }
  EXPECT_LT(sel.orientations.size(), 2000u);
}
