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

// Experiment configuration and the JSON/CSV artifact formats.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qutrit/interference.hpp"
#include "qutrit/spectrum.hpp"

namespace qutrit::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// Configuration

struct SystemConfig {
  double g = spin::OperatingPoint::kG;
  double b0_gauss = spin::OperatingPoint::kB0Gauss;
  double f0_mhz = spin::OperatingPoint::kF0Mhz;
  double d_mhz = spin::OperatingPoint::kDMhz;
  double e_mhz = spin::OperatingPoint::kEMhz;
  double theta_deg = spin::OperatingPoint::kThetaDeg;
  double phi_deg = spin::OperatingPoint::kPhiDeg;

  spin::ZfsParameters zfs() const { return {d_mhz, e_mhz}; }
  spin::Orientation orientation() const { return spin::Orientation::from_degrees(theta_deg, phi_deg); }
  spin::LabTensor lab_tensor() const {
    return spin::rotate_to_lab(spin::build_principal_tensor(zfs()), orientation());
  }
  spin::SpinSystem system() const { return spin::SpinSystem::addressing(g, b0_gauss, f0_mhz, lab_tensor()); }
};

struct PulseConfig {
  std::string model = "ideal";  // "ideal" | "finite"
  double rabi_mhz = 20.0;

  pulse::PulseStyle style() const {
    return model == "finite" ? pulse::PulseStyle::finite(rabi_mhz) : pulse::PulseStyle::ideal();
  }
};

struct PatternConfig {
  std::size_t grid_n = phase::kDefaultGrid;
  std::string state = "psi2";  // "psi1" | "psi2"
  double noise_sigma = 0.0;
};

struct ScheduleConfig {
  std::optional<double> ratio;
  std::optional<double> delta_f_plus_mhz;
  std::optional<double> delta_f_minus_mhz;
};

struct SpectrumConfig {
  std::size_t n_orientations = spectrum::kDefaultOrientations;
  double fwhm_gauss = spectrum::kDefaultFwhmGauss;
  double half_width_gauss = 150.0;
  std::size_t points = 1201;
  double window_lo_gauss = 3299.0 - 64.0;
  double window_hi_gauss = 3299.0 + 64.0;
};

struct LevelsConfig {
  double b_max_gauss = 4000.0;
  std::size_t points = 401;
};

struct OutputConfig {
  std::string directory = "out";
  std::string format = "csv";
};

struct ExperimentConfig {
  SystemConfig system;
  std::optional<pulse::RelaxationParams> relaxation = pulse::RelaxationParams::reported();
  PulseConfig pulses;
  PatternConfig pattern;
  ScheduleConfig schedule;
  SpectrumConfig spectrum;
  LevelsConfig levels;
  OutputConfig output;
  std::uint64_t seed = 0;

  tomo::TargetState state() const {
    return pattern.state == "psi1" ? tomo::TargetState::kPsi1 : tomo::TargetState::kPsi2;
  }

  /// Explicit offsets if given; otherwise a ratio split of -3 D_zz; otherwise
  /// the offsets of the addressed system.
  phase::EvolutionSchedule evolution_schedule() const {
    if (schedule.delta_f_plus_mhz && schedule.delta_f_minus_mhz) {
      return {*schedule.delta_f_plus_mhz, *schedule.delta_f_minus_mhz};
    }
    if (schedule.ratio) return phase::EvolutionSchedule::bound(system.lab_tensor().zz(), *schedule.ratio);
    return phase::EvolutionSchedule::from_system(system.system());
  }

  void validate() const;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(ErrorCode::kParse, where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (keys.count(item.key()) == 0) {
      throw Error(ErrorCode::kParse, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, v, where);
  out = v;
}

inline void require_positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kConfiguration, name + " must be positive and finite");
  }
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
  detail::require_positive(system.g, "system.g");
  detail::require_positive(system.f0_mhz, "system.f0_MHz");
  if (!(system.b0_gauss >= 0.0)) throw Error(ErrorCode::kConfiguration, "system.B0_gauss must be >= 0");
  if (!(system.theta_deg >= 0.0 && system.theta_deg <= 180.0)) {
    throw Error(ErrorCode::kConfiguration, "system.theta_deg must lie in [0, 180]");
  }
  spin::build_principal_tensor(system.zfs());
  if (relaxation) relaxation->validate();
  if (pulses.model != "ideal" && pulses.model != "finite") {
    throw Error(ErrorCode::kConfiguration, "pulses.model must be 'ideal' or 'finite'");
  }
  detail::require_positive(pulses.rabi_mhz, "pulses.rabi_MHz");
  if (pattern.grid_n < 8 || (pattern.grid_n & (pattern.grid_n - 1)) != 0) {
    throw Error(ErrorCode::kConfiguration, "pattern.grid_n must be a power of two >= 8");
  }
  if (pattern.state != "psi1" && pattern.state != "psi2") {
    throw Error(ErrorCode::kConfiguration, "pattern.state must be 'psi1' or 'psi2'");
  }
  if (!(pattern.noise_sigma >= 0.0)) throw Error(ErrorCode::kConfiguration, "pattern.noise_sigma must be >= 0");
  if (schedule.delta_f_plus_mhz.has_value() != schedule.delta_f_minus_mhz.has_value()) {
    throw Error(ErrorCode::kConfiguration, "schedule needs both delta_f_plus_MHz and delta_f_minus_MHz");
  }
  if (spectrum.n_orientations < spectrum::kMinOrientations) {
    throw Error(ErrorCode::kConfiguration, "spectrum.n_orientations must be >= 100");
  }
  detail::require_positive(spectrum.fwhm_gauss, "spectrum.fwhm_gauss");
  detail::require_positive(spectrum.half_width_gauss, "spectrum.half_width_gauss");
  if (spectrum.points < 2) throw Error(ErrorCode::kConfiguration, "spectrum.points must be >= 2");
  if (!(spectrum.window_hi_gauss > spectrum.window_lo_gauss)) {
    throw Error(ErrorCode::kConfiguration, "spectrum.window_gauss must be an increasing pair");
  }
  detail::require_positive(levels.b_max_gauss, "levels.b_max_gauss");
  if (levels.points < 2) throw Error(ErrorCode::kConfiguration, "levels.points must be >= 2");
  if (output.format != "csv") throw Error(ErrorCode::kConfiguration, "output.format must be 'csv'");
}

inline ExperimentConfig config_from_json(const json& j) {
  using detail::read;
  detail::reject_unknown(j, "config", {"system", "relaxation", "pulses", "pattern", "schedule",
                                       "spectrum", "levels", "output", "seed"});
  ExperimentConfig c;
  if (j.contains("system")) {
    const json& s = j.at("system");
    detail::reject_unknown(s, "system",
                           {"g", "B0_gauss", "f0_MHz", "D_MHz", "E_MHz", "theta_deg", "phi_deg"});
    read(s, "g", c.system.g, "system");
    read(s, "B0_gauss", c.system.b0_gauss, "system");
    read(s, "f0_MHz", c.system.f0_mhz, "system");
    read(s, "D_MHz", c.system.d_mhz, "system");
    read(s, "E_MHz", c.system.e_mhz, "system");
    read(s, "theta_deg", c.system.theta_deg, "system");
    read(s, "phi_deg", c.system.phi_deg, "system");
  }
  if (j.contains("relaxation")) {
    const json& r = j.at("relaxation");
    if (r.is_null()) {
      c.relaxation.reset();
    } else {
      detail::reject_unknown(r, "relaxation", {"t1_us", "t2_us"});
      pulse::RelaxationParams p = pulse::RelaxationParams::reported();
      read(r, "t1_us", p.t1_us, "relaxation");
      read(r, "t2_us", p.t2_us, "relaxation");
      c.relaxation = p;
    }
  }
  if (j.contains("pulses")) {
    const json& p = j.at("pulses");
    detail::reject_unknown(p, "pulses", {"model", "rabi_MHz"});
    read(p, "model", c.pulses.model, "pulses");
    read(p, "rabi_MHz", c.pulses.rabi_mhz, "pulses");
  }
  if (j.contains("pattern")) {
    const json& p = j.at("pattern");
    detail::reject_unknown(p, "pattern", {"grid_n", "state", "noise_sigma"});
    read(p, "grid_n", c.pattern.grid_n, "pattern");
    read(p, "state", c.pattern.state, "pattern");
    read(p, "noise_sigma", c.pattern.noise_sigma, "pattern");
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    detail::reject_unknown(s, "schedule", {"ratio", "delta_f_plus_MHz", "delta_f_minus_MHz"});
    read(s, "ratio", c.schedule.ratio, "schedule");
    read(s, "delta_f_plus_MHz", c.schedule.delta_f_plus_mhz, "schedule");
    read(s, "delta_f_minus_MHz", c.schedule.delta_f_minus_mhz, "schedule");
  }
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    detail::reject_unknown(s, "spectrum", {"n_orientations", "fwhm_gauss", "half_width_gauss",
                                           "points", "window_gauss"});
    read(s, "n_orientations", c.spectrum.n_orientations, "spectrum");
    read(s, "fwhm_gauss", c.spectrum.fwhm_gauss, "spectrum");
    read(s, "half_width_gauss", c.spectrum.half_width_gauss, "spectrum");
    read(s, "points", c.spectrum.points, "spectrum");
    if (s.contains("window_gauss")) {
      std::vector<double> w;
      read(s, "window_gauss", w, "spectrum");
      if (w.size() != 2) throw Error(ErrorCode::kParse, "spectrum.window_gauss must be [lo, hi]");
      c.spectrum.window_lo_gauss = w[0];
      c.spectrum.window_hi_gauss = w[1];
    }
  }
  if (j.contains("levels")) {
    const json& l = j.at("levels");
    detail::reject_unknown(l, "levels", {"b_max_gauss", "points"});
    read(l, "b_max_gauss", c.levels.b_max_gauss, "levels");
    read(l, "points", c.levels.points, "levels");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    detail::reject_unknown(o, "output", {"directory", "format"});
    read(o, "directory", c.output.directory, "output");
    read(o, "format", c.output.format, "output");
  }
  read(j, "seed", c.seed, "config");
  c.validate();
  return c;
}

inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["system"] = {{"g", c.system.g},           {"B0_gauss", c.system.b0_gauss},
                 {"f0_MHz", c.system.f0_mhz}, {"D_MHz", c.system.d_mhz},
                 {"E_MHz", c.system.e_mhz},   {"theta_deg", c.system.theta_deg},
                 {"phi_deg", c.system.phi_deg}};
  j["relaxation"] = c.relaxation ? json{{"t1_us", c.relaxation->t1_us}, {"t2_us", c.relaxation->t2_us}}
                                 : json(nullptr);
  j["pulses"] = {{"model", c.pulses.model}, {"rabi_MHz", c.pulses.rabi_mhz}};
  j["pattern"] = {{"grid_n", c.pattern.grid_n},
                  {"state", c.pattern.state},
                  {"noise_sigma", c.pattern.noise_sigma}};
  json s = json::object();
  if (c.schedule.ratio) s["ratio"] = *c.schedule.ratio;
  if (c.schedule.delta_f_plus_mhz) s["delta_f_plus_MHz"] = *c.schedule.delta_f_plus_mhz;
  if (c.schedule.delta_f_minus_mhz) s["delta_f_minus_MHz"] = *c.schedule.delta_f_minus_mhz;
  j["schedule"] = s;
  j["spectrum"] = {{"n_orientations", c.spectrum.n_orientations},
                   {"fwhm_gauss", c.spectrum.fwhm_gauss},
                   {"half_width_gauss", c.spectrum.half_width_gauss},
                   {"points", c.spectrum.points},
                   {"window_gauss", {c.spectrum.window_lo_gauss, c.spectrum.window_hi_gauss}}};
  j["levels"] = {{"b_max_gauss", c.levels.b_max_gauss}, {"points", c.levels.points}};
  j["output"] = {{"directory", c.output.directory}, {"format", c.output.format}};
  j["seed"] = c.seed;
  return j;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, origin + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

inline ExperimentConfig load_config(const std::string& path) {
  return config_from_json(parse_json_text(read_file(path), path));
}

// ---------------------------------------------------------------------------
// Sequence programs and densities

inline json program_to_json(const pulse::SequenceProgram& prog) {
  json arr = json::array();
  for (const auto& step : prog.steps) {
    if (const auto* d = std::get_if<pulse::Delay>(&step)) {
      arr.push_back({{"delay_us", d->duration_us}});
      continue;
    }
    const auto& p = std::get<pulse::PulseSpec>(step);
    json body = {{"transition", std::string(pulse::to_string(p.transition))},
                 {"tip_deg", radians_to_degrees(p.tip_angle)},
                 {"phase_deg", radians_to_degrees(p.phase)},
                 {"model", p.is_finite() ? "finite" : "ideal"}};
    if (const auto* f = std::get_if<pulse::FiniteModel>(&p.model)) body["rabi_MHz"] = f->rabi_mhz;
    arr.push_back({{"pulse", body}});
  }
  return arr;
}

inline pulse::SequenceProgram program_from_json(const json& arr) {
  if (!arr.is_array()) throw Error(ErrorCode::kParse, "sequence program must be a JSON array");
  pulse::SequenceProgram prog;
  for (const json& item : arr) {
    detail::reject_unknown(item, "program step", {"pulse", "delay_us"});
    if (item.contains("delay_us")) {
      double d = 0.0;
      detail::read(item, "delay_us", d, "program step");
      prog.steps.emplace_back(pulse::Delay{d});
      continue;
    }
    if (!item.contains("pulse")) throw Error(ErrorCode::kParse, "program step needs 'pulse' or 'delay_us'");
    const json& p = item.at("pulse");
    detail::reject_unknown(p, "pulse", {"transition", "tip_deg", "phase_deg", "model", "rabi_MHz"});
    std::string transition, model = "ideal";
    double tip = 0.0, phase = 0.0, rabi = 20.0;
    detail::read(p, "transition", transition, "pulse");
    detail::read(p, "tip_deg", tip, "pulse");
    detail::read(p, "phase_deg", phase, "pulse");
    detail::read(p, "model", model, "pulse");
    detail::read(p, "rabi_MHz", rabi, "pulse");
    if (transition != "plus" && transition != "minus") {
      throw Error(ErrorCode::kParse, "pulse.transition must be 'plus' or 'minus'");
    }
    const auto t = transition == "plus" ? pulse::Transition::kPlus : pulse::Transition::kMinus;
    if (model == "ideal") {
      prog.steps.emplace_back(pulse::PulseSpec::ideal(t, degrees_to_radians(tip), degrees_to_radians(phase)));
    } else if (model == "finite") {
      prog.steps.emplace_back(
          pulse::PulseSpec::finite(t, degrees_to_radians(tip), degrees_to_radians(phase), rabi));
    } else {
      throw Error(ErrorCode::kParse, "pulse.model must be 'ideal' or 'finite'");
    }
  }
  return prog;
}

inline json matrix_parts_to_json(const Matrix3c& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < 3; ++r) {
    re.push_back({m(r, 0).real(), m(r, 1).real(), m(r, 2).real()});
    im.push_back({m(r, 0).imag(), m(r, 1).imag(), m(r, 2).imag()});
  }
  return {{"re", re}, {"im", im}};
}

inline json density_to_json(const DensityMatrix& rho) { return matrix_parts_to_json(rho.matrix()); }

inline DensityMatrix density_from_json(const json& j, double psd_tolerance = DensityMatrix::kTolerance) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw Error(ErrorCode::kParse, "density JSON needs 're' and 'im'");
  }
  Matrix3c m;
  try {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        m(r, c) = Complex(j.at("re").at(r).at(c).get<double>(), j.at("im").at(r).at(c).get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("density JSON: ") + e.what());
  }
  return DensityMatrix(m, psd_tolerance);
}

inline json tomography_to_json(const tomo::TomographyResult& r, const DensityMatrix& ideal) {
  json j = density_to_json(r.rho);
  j["fidelity"] = tomo::fidelity(r.rho, ideal);
  j["purity"] = tomo::purity(r.rho);
  j["residual"] = r.residual;
  j["settings"] = r.settings_used;
  return j;
}

/// Bar-chart table: one row per matrix element.
inline std::string tomography_csv(const DensityMatrix& rho, const DensityMatrix& ideal) {
  std::string out = "row,col,re,im,ideal_re,ideal_im\n";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out += std::to_string(r) + "," + std::to_string(c) + "," + format_double(rho(r, c).real()) +
             "," + format_double(rho(r, c).imag()) + "," + format_double(ideal(r, c).real()) + "," +
             format_double(ideal(r, c).imag()) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Patterns, peaks, traces, paths

inline std::string pattern_csv(const phase::PhasePattern& p) {
  std::string out = "phi_plus_rad";
  for (std::size_t j = 0; j < p.size(); ++j) out += "," + format_double(p.phase(j));
  out += "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_double(p.phase(i));
    for (std::size_t j = 0; j < p.size(); ++j) out += "," + format_double(p(i, j));
    out += "\n";
  }
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& cell, const std::string& where) {
  std::string s = cell;
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, where + ": not a number '" + cell + "'");
  }
  return v;
}

inline phase::PhasePattern pattern_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "pattern CSV is empty");
  const std::size_t n = split(line, ',').size() - 1;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line, ',');
    if (cells.size() != n + 1) {
      throw Error(ErrorCode::kParse, "pattern CSV row " + std::to_string(rows + 1) + " has wrong width");
    }
    for (std::size_t j = 1; j < cells.size(); ++j) {
      values.push_back(parse_double(cells[j], "pattern CSV"));
    }
    ++rows;
  }
  if (rows != n) throw Error(ErrorCode::kParse, "pattern CSV must be square");
  return phase::PhasePattern(n, std::move(values));
}

/// Sorted by magnitude (descending), then by (k+, k-).
inline json peaks_to_json(const phase::FourierPeaks& peaks) {
  std::vector<std::pair<std::pair<int, int>, double>> items(peaks.entries.begin(), peaks.entries.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  json arr = json::array();
  for (const auto& [k, m] : items) {
    arr.push_back({{"k_plus", k.first}, {"k_minus", k.second}, {"magnitude", m}});
  }
  return arr;
}

inline std::string trace_csv(const std::vector<phase::TracePoint>& trace) {
  std::string out = "t_us,M0plus\n";
  for (const auto& p : trace) out += format_double(p.t_us) + "," + format_double(p.m0plus) + "\n";
  return out;
}

inline std::string time_grid_csv(const phase::TimeGrid& g) {
  std::string out = "t_plus_us";
  for (double t : g.t_minus_us) out += "," + format_double(t);
  out += "\n";
  const std::size_t n = g.t_plus_us.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += format_double(g.t_plus_us[i]);
    for (std::size_t j = 0; j < n; ++j) out += "," + format_double(g.values[i * n + j]);
    out += "\n";
  }
  return out;
}

inline std::string path_csv(const std::vector<phase::TorusPoint>& path) {
  std::string out = "t_us,phi1_rad,phi2_rad\n";
  for (const auto& p : path) {
    out += format_double(p.t_us) + "," + format_double(p.phi1) + "," + format_double(p.phi2) + "\n";
  }
  return out;
}

inline json closure_to_json(const phase::ClosureReport& c, const phase::EvolutionSchedule& s) {
  json j = {{"delta_f_plus_MHz", s.delta_f_plus},
            {"delta_f_minus_MHz", s.delta_f_minus},
            {"ratio", s.ratio()},
            {"closed", c.closed}};
  if (c.closed) {
    j["winding"] = {c.winding_plus, c.winding_minus};
    j["closure_time_us"] = c.closure_time_us;
  } else {
    j["winding"] = nullptr;
  }
  j["windings_examined"] = c.windings_examined;
  j["min_return_distance_rad"] =
      std::isfinite(c.min_return_distance) ? json(c.min_return_distance) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Levels and spectra

inline std::string levels_csv(const std::vector<double>& fields, const std::vector<Vector3d>& energies) {
  std::string out = "B0_gauss,E_plus_MHz,E_zero_MHz,E_minus_MHz\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out += format_double(fields[i]) + "," + format_double(energies[i](0)) + "," +
           format_double(energies[i](1)) + "," + format_double(energies[i](2)) + "\n";
  }
  return out;
}

inline std::string spectrum_csv(const spectrum::SpectrumResult& s) {
  std::string out = "B_gauss,intensity\n";
  for (std::size_t i = 0; i < s.field_axis.size(); ++i) {
    out += format_double(s.field_axis[i]) + "," + format_double(s.intensity[i]) + "\n";
  }
  return out;
}

inline json selection_to_json(const spectrum::OrientationSelection& sel) {
  json orientations = json::array();
  for (const auto& o : sel.orientations) {
    orientations.push_back({{"theta_deg", radians_to_degrees(o.theta)},
                            {"phi_deg", radians_to_degrees(o.phi)},
                            {"dzz_MHz", o.dzz_mhz}});
  }
  return {{"window_gauss", {sel.window_lo_gauss, sel.window_hi_gauss}},
          {"total_orientations", sel.total},
          {"abs_dzz_bin_MHz", sel.bin_width_mhz},
          {"abs_dzz_histogram", sel.abs_dzz_histogram},
          {"abs_dzz_mode_MHz", sel.abs_dzz_mode_mhz},
          {"orientations", orientations}};
}

}  // namespace qutrit::io
