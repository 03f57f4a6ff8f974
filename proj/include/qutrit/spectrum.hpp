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

// Echo-detected field-sweep powder spectrum of the pseudopure |0> triplet
// and orientation selection by a field window.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "qutrit/spin_core.hpp"

namespace qutrit::spectrum {

using spin::LabTensor;
using spin::Orientation;
using spin::SpinSystem;
using spin::ZfsParameters;

inline constexpr std::size_t kDefaultOrientations = 5000;
inline constexpr std::size_t kMinOrientations = 100;
inline constexpr double kDefaultFwhmGauss = 15.0;

/// Equal-area Fibonacci lattice over the full sphere.
inline std::vector<Orientation> sphere_grid(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kConfiguration, "sphere grid needs at least one point");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Orientation> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
    out.emplace_back(std::acos(std::clamp(z, -1.0, 1.0)), golden * static_cast<double>(k));
  }
  return out;
}

struct ResonanceFields {
  double plus;   // Gauss, 0<->+ (absorption)
  double minus;  // Gauss, 0<->- (emission)
};

/// Fields at which the 0<->+ and 0<->- transitions of `lab` match f0, by
/// bracketed root finding on f_transition(B) - f0.
inline ResonanceFields resonance_fields(double g_factor, double f0_mhz, const LabTensor& lab) {
  const double gamma = g_factor * spin::kBohrMhzPerGauss;  // MHz per Gauss
  const double centre = spin::resonance_field(f0_mhz, g_factor);
  const Vector3d pv = lab.principal_values();
  const double zfs = pv.cwiseAbs().maxCoeff();
  const double half_width = (3.0 * zfs + 1.0) / gamma;
  const double lo = std::max(centre - half_width, 0.0);
  const double hi = centre + half_width;

  auto solve = [&](bool plus) {
    auto f = [&](double b) {
      const auto t = spin::transition_frequencies(spin::hamiltonian(g_factor, b, lab));
      return (plus ? t.plus : t.minus) - f0_mhz;
    };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (f_lo > 0.0 || f_hi < 0.0) {
      throw Error(ErrorCode::kRegime, "transition does not cross f0 inside the field bracket");
    }
    std::uintmax_t iterations = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(45), iterations);
    return 0.5 * (r.first + r.second);
  };
  return {solve(true), solve(false)};
}

struct FieldRange {
  double lo_gauss;
  double hi_gauss;
  std::size_t points = 1201;

  /// Centred on the free-electron resonance, +-`half_width` Gauss.
  static FieldRange around(double centre, double half_width, std::size_t points = 1201) {
    return {centre - half_width, centre + half_width, points};
  }
};

struct SpectrumResult {
  std::vector<double> field_axis;  // Gauss, strictly increasing
  std::vector<double> intensity;   // absorption positive, emission negative
  double fwhm_gauss;
  double centre_gauss;             // h f0 / (g mu_B)
  std::vector<std::string> warnings;
};

struct OrientationLines {
  Orientation orientation;
  double dzz_mhz;
  ResonanceFields fields;
};

inline std::vector<OrientationLines> orientation_lines(const SpinSystem& sys,
                                                       const ZfsParameters& zfs,
                                                       std::size_t n_orientations) {
  const LabTensor principal = spin::build_principal_tensor(zfs);
  const std::vector<Orientation> grid = sphere_grid(n_orientations);
  std::vector<OrientationLines> out(grid.size(), {Orientation(0.0, 0.0), 0.0, {0.0, 0.0}});
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(grid.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const LabTensor lab = spin::rotate_to_lab(principal, grid[idx]);
    out[idx] = {grid[idx], lab.zz(), resonance_fields(sys.g_factor(), sys.f0(), lab)};
  }
  return out;
}

/// Powder average over an equal-area grid; every orientation contributes +1
/// at its 0<->+ field and -1 at its 0<->- field, each a unit-area Gaussian of
/// the given FWHM.
inline SpectrumResult powder_spectrum(const SpinSystem& sys, const ZfsParameters& zfs,
                                      const FieldRange& range,
                                      std::size_t n_orientations = kDefaultOrientations,
                                      double fwhm_gauss = kDefaultFwhmGauss) {
  if (n_orientations < kMinOrientations) {
    throw Error(ErrorCode::kConfiguration, "powder spectrum needs at least 100 orientations");
  }
  if (!(range.hi_gauss > range.lo_gauss) || range.points < 2) {
    throw Error(ErrorCode::kConfiguration, "field range must be increasing with >= 2 points");
  }
  if (!(fwhm_gauss > 0.0)) throw Error(ErrorCode::kConfiguration, "broadening must be positive");

  const auto lines = orientation_lines(sys, zfs, n_orientations);
  SpectrumResult out;
  out.fwhm_gauss = fwhm_gauss;
  out.centre_gauss = spin::resonance_field(sys.f0(), sys.g_factor());
  const double step = (range.hi_gauss - range.lo_gauss) / static_cast<double>(range.points - 1);
  for (std::size_t i = 0; i < range.points; ++i) {
    out.field_axis.push_back(range.lo_gauss + step * static_cast<double>(i));
  }
  out.intensity.assign(range.points, 0.0);

  const double sigma = fwhm_gauss / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double norm = 1.0 / (sigma * std::sqrt(kTwoPi) * static_cast<double>(lines.size()));
  std::size_t inside = 0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(range.points); ++i) {
    const double b = out.field_axis[static_cast<std::size_t>(i)];
    double acc = 0.0;
    for (const auto& line : lines) {
      const double up = (b - line.fields.plus) / sigma;
      const double down = (b - line.fields.minus) / sigma;
      acc += std::exp(-0.5 * up * up) - std::exp(-0.5 * down * down);
    }
    out.intensity[static_cast<std::size_t>(i)] = norm * acc;
  }
  for (const auto& line : lines) {
    for (double f : {line.fields.plus, line.fields.minus}) {
      if (f >= range.lo_gauss && f <= range.hi_gauss) ++inside;
    }
  }
  if (inside == 0) {
    out.warnings.push_back("empty spectrum: no resonance falls inside the field range");
  }
  return out;
}

struct SelectedOrientation {
  double theta;
  double phi;
  double dzz_mhz;
};

struct OrientationSelection {
  double window_lo_gauss;
  double window_hi_gauss;
  std::size_t total;
  std::vector<SelectedOrientation> orientations;
  double bin_width_mhz;
  std::vector<std::size_t> abs_dzz_histogram;  // bin k covers [k w, (k+1) w)
  double abs_dzz_mode_mhz;                     // centre of the fullest bin
};

/// Orientations with a 0<->+ or 0<->- resonance inside [lo, hi] Gauss.
inline OrientationSelection orientation_selection(const SpinSystem& sys, const ZfsParameters& zfs,
                                                  double lo_gauss, double hi_gauss,
                                                  std::size_t n_orientations = kDefaultOrientations,
                                                  double bin_width_mhz = 4.0) {
  if (!(hi_gauss > lo_gauss)) throw Error(ErrorCode::kConfiguration, "selection window is empty");
  if (!(bin_width_mhz > 0.0)) throw Error(ErrorCode::kConfiguration, "bin width must be positive");
  const auto lines = orientation_lines(sys, zfs, n_orientations);
  OrientationSelection out{lo_gauss, hi_gauss, lines.size(), {}, bin_width_mhz, {}, 0.0};
  auto in_window = [&](double f) { return f >= lo_gauss && f <= hi_gauss; };
  for (const auto& line : lines) {
    if (in_window(line.fields.plus) || in_window(line.fields.minus)) {
      out.orientations.push_back(
          {line.orientation.theta(), line.orientation.phi(), line.dzz_mhz});
      const auto bin = static_cast<std::size_t>(std::abs(line.dzz_mhz) / bin_width_mhz);
      if (out.abs_dzz_histogram.size() <= bin) out.abs_dzz_histogram.resize(bin + 1, 0);
      ++out.abs_dzz_histogram[bin];
    }
  }
  if (!out.abs_dzz_histogram.empty()) {
    const auto it = std::max_element(out.abs_dzz_histogram.begin(), out.abs_dzz_histogram.end());
    const auto k = static_cast<double>(it - out.abs_dzz_histogram.begin());
    out.abs_dzz_mode_mhz = (k + 0.5) * bin_width_mhz;
  }
  return out;
}

}  // namespace qutrit::spectrum
