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

// qutrit: batch front end. Each subcommand loads an optional JSON config,
// runs one simulation and writes CSV/JSON artifacts plus a metadata file.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qutrit/io.hpp"
#include "qutrit/qutrit.hpp"

namespace {

using qutrit::Error;
using qutrit::ErrorCode;
using qutrit::io::json;
namespace io = qutrit::io;
namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::string> state;
  std::optional<double> ratio;
};

io::ExperimentConfig resolve_config(const CommonArgs& a) {
  io::ExperimentConfig c = a.config_path.empty() ? io::ExperimentConfig{} : io::load_config(a.config_path);
  if (a.seed) c.seed = *a.seed;
  if (a.grid) c.pattern.grid_n = *a.grid;
  if (a.state) c.pattern.state = *a.state;
  if (a.ratio) {
    c.schedule.ratio = *a.ratio;
    c.schedule.delta_f_plus_mhz.reset();
    c.schedule.delta_f_minus_mhz.reset();
  }
  if (!a.out_dir.empty()) c.output.directory = a.out_dir;
  c.validate();
  return c;
}

fs::path output_dir(const io::ExperimentConfig& c) {
  const fs::path dir(c.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write(const fs::path& path, const std::string& content) { io::write_file(path.string(), content); }

void write_meta(const fs::path& dir, const std::string& command, const io::ExperimentConfig& c,
                const json& extra = json::object()) {
  json meta = {{"command", command}, {"seed", c.seed}, {"config", io::config_to_json(c)}};
  for (const auto& item : extra.items()) meta[item.key()] = item.value();
  write(dir / (command + "_meta.json"), meta.dump(2) + "\n");
}

std::optional<qutrit::pulse::Setup> setup_for(const io::ExperimentConfig& c) {
  if (!c.pulses.style().is_finite()) return std::nullopt;
  return qutrit::pulse::Setup{c.system.system(), c.system.lab_tensor()};
}

void cmd_levels(const io::ExperimentConfig& c) {
  const auto lab = c.system.lab_tensor();
  std::vector<double> fields;
  std::vector<qutrit::Vector3d> energies;
  for (std::size_t i = 0; i < c.levels.points; ++i) {
    const double b = c.levels.b_max_gauss * static_cast<double>(i) / static_cast<double>(c.levels.points - 1);
    fields.push_back(b);
    energies.push_back(qutrit::spin::levels_by_spin_projection(qutrit::spin::hamiltonian(c.system.g, b, lab)));
  }
  const auto dir = output_dir(c);
  write(dir / "levels.csv", io::levels_csv(fields, energies));
  const auto sys = c.system.system();
  write_meta(dir, "levels", c,
             {{"f_plus_MHz", sys.f_plus()},
              {"f_minus_MHz", sys.f_minus()},
              {"dzz_MHz", lab.zz()},
              {"resonance_field_gauss", qutrit::spin::resonance_field(c.system.f0_mhz, c.system.g)}});
}

void cmd_edfs(const io::ExperimentConfig& c) {
  namespace sp = qutrit::spectrum;
  const auto sys = c.system.system();
  const double centre = qutrit::spin::resonance_field(c.system.f0_mhz, c.system.g);
  const auto result = sp::powder_spectrum(
      sys, c.system.zfs(), sp::FieldRange::around(centre, c.spectrum.half_width_gauss, c.spectrum.points),
      c.spectrum.n_orientations, c.spectrum.fwhm_gauss);
  const auto selection = sp::orientation_selection(sys, c.system.zfs(), c.spectrum.window_lo_gauss,
                                                   c.spectrum.window_hi_gauss, c.spectrum.n_orientations);
  for (const auto& w : result.warnings) std::cerr << json{{"warning", w}}.dump() << "\n";
  const auto dir = output_dir(c);
  write(dir / "spectrum.csv", io::spectrum_csv(result));
  write(dir / "selection.json", io::selection_to_json(selection).dump(2) + "\n");
  write_meta(dir, "edfs", c, {{"centre_gauss", result.centre_gauss}, {"warnings", result.warnings}});
}

void cmd_prepare(const io::ExperimentConfig& c) {
  namespace tomo = qutrit::tomo;
  const auto setup = setup_for(c);
  const auto prog = tomo::prepare(c.state(), c.pulses.style(), c.relaxation);
  const auto rho = qutrit::pulse::run_sequence(qutrit::DensityMatrix::basis(qutrit::kZeroLevel), prog,
                                               setup ? &*setup : nullptr);
  json out = io::density_to_json(rho);
  out["fidelity"] = tomo::fidelity(rho, tomo::ideal_state(c.state()));
  out["program"] = io::program_to_json(prog);
  const auto dir = output_dir(c);
  write(dir / ("prepare_" + c.pattern.state + ".json"), out.dump(2) + "\n");
  write_meta(dir, "prepare", c);
}

void cmd_tomo(const io::ExperimentConfig& c) {
  namespace tomo = qutrit::tomo;
  tomo::TomographyOptions opt;
  opt.analysis_style = c.pulses.style();
  const auto prog = tomo::prepare(c.state(), c.pulses.style());
  const auto result = tomo::tomography(prog, c.system.system(), c.system.lab_tensor(), c.relaxation, opt);
  const auto ideal = tomo::ideal_state(c.state());
  const auto dir = output_dir(c);
  write(dir / ("tomo_" + c.pattern.state + ".json"), io::tomography_to_json(result, ideal).dump(2) + "\n");
  write(dir / ("tomo_" + c.pattern.state + ".csv"), io::tomography_csv(result.rho, ideal));
  write_meta(dir, "tomo", c);
}

void cmd_interfere(const io::ExperimentConfig& c) {
  namespace phase = qutrit::phase;
  phase::InterferenceOptions opt;
  opt.pulses = c.pulses.style();
  opt.setup = setup_for(c);
  opt.relaxation = c.relaxation;
  if (c.pattern.noise_sigma > 0.0) opt.noise = phase::NoiseSpec{c.pattern.noise_sigma, c.seed};
  const auto pattern = phase::interference_pattern(c.state(), c.pattern.grid_n, opt);
  const auto dir = output_dir(c);
  write(dir / ("pattern_" + c.pattern.state + ".csv"), io::pattern_csv(pattern));
  write_meta(dir, "interfere", c);
}

void cmd_fft(const io::ExperimentConfig& c, const std::string& pattern_path, double threshold) {
  const auto pattern = io::pattern_from_csv(io::read_file(pattern_path));
  const auto peaks = qutrit::phase::fourier_peaks(pattern, threshold);
  const auto dir = output_dir(c);
  write(dir / "peaks.json", io::peaks_to_json(peaks).dump(2) + "\n");
  write_meta(dir, "fft", c, {{"pattern", pattern_path}, {"threshold", threshold}});
}

void cmd_tppi(const io::ExperimentConfig& c, const std::string& pattern_path, double t_max_us,
              std::size_t samples) {
  namespace phase = qutrit::phase;
  const auto pattern = io::pattern_from_csv(io::read_file(pattern_path));
  const auto schedule = c.evolution_schedule();
  const auto grid = phase::tppi_remap(pattern, schedule);
  const auto trace = phase::evolution_trace(pattern, schedule, t_max_us, samples);
  const auto dir = output_dir(c);
  write(dir / "tppi_grid.csv", io::time_grid_csv(grid));
  write(dir / "trace.csv", io::trace_csv(trace));
  write_meta(dir, "tppi", c,
             {{"pattern", pattern_path},
              {"delta_f_plus_MHz", schedule.delta_f_plus},
              {"delta_f_minus_MHz", schedule.delta_f_minus},
              {"t_max_us", t_max_us}});
}

void cmd_torus(const io::ExperimentConfig& c, double t_max_us, std::size_t samples) {
  namespace phase = qutrit::phase;
  const auto schedule = c.evolution_schedule();
  const auto path = phase::torus_path(schedule, t_max_us, samples);
  const auto dir = output_dir(c);
  write(dir / "torus_path.csv", io::path_csv(path.points));
  write(dir / "closure.json", io::closure_to_json(path.closure, schedule).dump(2) + "\n");
  write_meta(dir, "torus", c, {{"t_max_us", t_max_us}});
}

int report(ErrorCode code, const std::string& message) {
  std::cerr << json{{"error", {{"code", std::string(qutrit::to_string(code))}, {"message", message}}}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed-EPR spin-1 qutrit simulator"};
  app.require_subcommand(1);
  CommonArgs args;
  std::string pattern_path;
  double threshold = 0.05;
  double t_max_us = 1.0;
  std::size_t samples = 2001;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_dir, "Output directory");
    sub->add_option("--seed", args.seed, "Seed for optional noise");
    sub->add_option("--grid", args.grid, "Phase grid size (power of two)");
    sub->add_option("--state", args.state, "Target state")->check(CLI::IsMember({"psi1", "psi2"}));
    sub->add_option("--ratio", args.ratio, "Delta f+ / Delta f- of the evolution schedule");
  };

  auto* levels = app.add_subcommand("levels", "Energy levels vs field");
  auto* edfs = app.add_subcommand("edfs", "Powder field-sweep spectrum and orientation selection");
  auto* prepare = app.add_subcommand("prepare", "Prepare psi1 or psi2 from |0>");
  auto* tomo = app.add_subcommand("tomo", "Simulated density-matrix tomography");
  auto* interfere = app.add_subcommand("interfere", "Phase interference pattern");
  auto* fft = app.add_subcommand("fft", "2D Fourier peaks of a pattern file");
  auto* tppi = app.add_subcommand("tppi", "Time-axis remap and evolution trace of a pattern file");
  auto* torus = app.add_subcommand("torus", "Phase-torus path and closure report");
  for (auto* sub : {levels, edfs, prepare, tomo, interfere, fft, tppi, torus}) common(sub);
  fft->add_option("--pattern", pattern_path, "Pattern CSV")->required();
  fft->add_option("--threshold", threshold, "Relative magnitude threshold");
  tppi->add_option("--pattern", pattern_path, "Pattern CSV")->required();
  for (auto* sub : {tppi, torus}) {
    sub->add_option("--t-max", t_max_us, "Evolution time span (us)");
    sub->add_option("--samples", samples, "Samples along the path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(ErrorCode::kParse, e.what());
  }

  try {
    const io::ExperimentConfig c = resolve_config(args);
    if (*levels) cmd_levels(c);
    if (*edfs) cmd_edfs(c);
    if (*prepare) cmd_prepare(c);
    if (*tomo) cmd_tomo(c);
    if (*interfere) cmd_interfere(c);
    if (*fft) cmd_fft(c, pattern_path, threshold);
    if (*tppi) cmd_tppi(c, pattern_path, t_max_us, samples);
    if (*torus) cmd_torus(c, t_max_us, samples);
  } catch (const Error& e) {
    return report(e.code(), e.what());
  } catch (const std::exception& e) {
    return report(ErrorCode::kConfiguration, e.what());
  }
  return 0;
}
