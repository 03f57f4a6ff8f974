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

// Drives the built qutrit executable end to end.

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "gtest/gtest.h"

#include "qutrit/io.hpp"

namespace fs = std::filesystem;
using qutrit::io::json;
using qutrit::io::read_file;

namespace {

struct CliRun {
  int status;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qutrit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(QUTRIT_CLI) + " " + args + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, fs::exists(err) ? read_file(err.string()) : ""};
  }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }
  std::string reference_config() const { return std::string(QUTRIT_CONFIG_DIR) + "/reference.json"; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, levels_reports_operating_point) {
  ASSERT_EQ(run("levels --config " + reference_config() + " --out " + out("a")).status, 0);
  const std::string csv = read_file(out("a/levels.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "B0_gauss,E_plus_MHz,E_zero_MHz,E_minus_MHz");
  const json meta = json::parse(read_file(out("a/levels_meta.json")));
  EXPECT_LT(meta["f_plus_MHz"].get<double>(), 9250.5);
  EXPECT_GT(meta["f_minus_MHz"].get<double>(), 9250.5);
}

TEST_F(Cli, interfere_then_fft_gives_four_four_one) {
  ASSERT_EQ(run("interfere --state psi2 --grid 32 --out " + out("a")).status, 0);
  ASSERT_EQ(run("fft --pattern " + out("a/pattern_psi2.csv") + " --out " + out("a")).status, 0);
  const json peaks = json::parse(read_file(out("a/peaks.json")));
  double m10 = 0, m01 = 0, m11 = 0;
  for (const auto& p : peaks) {
    const int a = p["k_plus"], b = p["k_minus"];
    if (a == 1 && b == 0) m10 = p["magnitude"];
    if (a == 0 && b == 1) m01 = p["magnitude"];
    if (a == 1 && b == 1) m11 = p["magnitude"];
  }
  EXPECT_NEAR(m10, 1.0, 1e-9);
  EXPECT_NEAR(m11, 1.0, 1e-9);
  EXPECT_NEAR(m01, 0.25, 1e-9);
}

TEST_F(Cli, torus_ratio_half_closes_with_winding_one_two) {
  ASSERT_EQ(run("torus --ratio 0.5 --t-max 0.5 --out " + out("a")).status, 0);
  const json c = json::parse(read_file(out("a/closure.json")));
  EXPECT_TRUE(c["closed"].get<bool>());
  EXPECT_EQ(c["winding"], json::array({1, 2}));
}

TEST_F(Cli, prepare_psi1_is_ideal_projector) {
  ASSERT_EQ(run("prepare --state psi1 --out " + out("a")).status, 0);
  const json j = json::parse(read_file(out("a/prepare_psi1.json")));
  const auto rho = qutrit::io::density_from_json(j);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(rho(0, 2).real(), 0.5, 1e-12);
  EXPECT_NEAR(rho(1, 1).real(), 0.0, 1e-12);
  EXPECT_GE(j["fidelity"].get<double>(), 1.0 - 1e-9);
}

TEST_F(Cli, tomo_writes_json_and_table) {
  ASSERT_EQ(run("tomo --state psi2 --out " + out("a")).status, 0);
  const json j = json::parse(read_file(out("a/tomo_psi2.json")));
  EXPECT_GE(j["fidelity"].get<double>(), 1.0 - 1e-9);
  EXPECT_TRUE(fs::exists(out("a/tomo_psi2.csv")));
}

TEST_F(Cli, tppi_writes_grid_and_trace) {
  ASSERT_EQ(run("interfere --state psi1 --grid 16 --out " + out("a")).status, 0);
  ASSERT_EQ(run("tppi --pattern " + out("a/pattern_psi1.csv") + " --ratio 1 --t-max 0.05 --samples 11 --out " +
                out("a"))
                .status,
            0);
  const std::string trace = read_file(out("a/trace.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "t_us,M0plus");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 12);
}

TEST_F(Cli, edfs_writes_spectrum_and_selection) {
  ASSERT_EQ(run("edfs --config " + reference_config() + " --out " + out("a")).status, 0);
  const json sel = json::parse(read_file(out("a/selection.json")));
  EXPECT_EQ(sel["window_gauss"], json::array({3235.0, 3363.0}));
  EXPECT_FALSE(sel["orientations"].empty());
  const std::string csv = read_file(out("a/spectrum.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "B_gauss,intensity");
}

TEST_F(Cli, reruns_are_byte_identical) {
  qutrit::io::ExperimentConfig c;
  c.pattern.noise_sigma = 0.05;
  c.pattern.grid_n = 16;
  qutrit::io::write_file(out("noisy.json"), qutrit::io::config_to_json(c).dump());
  for (const char* d : {"a", "b"}) {
    ASSERT_EQ(run("interfere --config " + out("noisy.json") + " --seed 7 --out " + out(d)).status, 0);
  }
  EXPECT_EQ(read_file(out("a/pattern_psi2.csv")), read_file(out("b/pattern_psi2.csv")));
  json meta = json::parse(read_file(out("a/interfere_meta.json")));
  json other = json::parse(read_file(out("b/interfere_meta.json")));
  meta["config"].erase("output");
  other["config"].erase("output");
  EXPECT_EQ(meta, other);
  EXPECT_EQ(meta["seed"], 7);
  ASSERT_EQ(run("interfere --config " + out("noisy.json") + " --seed 8 --out " + out("c")).status, 0);
  EXPECT_NE(read_file(out("a/pattern_psi2.csv")), read_file(out("c/pattern_psi2.csv")));
}

TEST_F(Cli, errors_are_json_on_stderr) {
  qutrit::io::write_file(out("bad.json"), R"({"system": {"colour": "blue"}})");
  const CliRun r = run("levels --config " + out("bad.json") + " --out " + out("a"));
  EXPECT_NE(r.status, 0);
  const json e = json::parse(r.err);
  EXPECT_EQ(e["error"]["code"], "parse");
  EXPECT_NE(e["error"]["message"].get<std::string>().find("colour"), std::string::npos);

  const CliRun degenerate = run("tppi --pattern " + out("missing.csv") + " --out " + out("a"));
  EXPECT_NE(degenerate.status, 0);
  EXPECT_EQ(json::parse(degenerate.err)["error"]["code"], "io");

  const CliRun bad_grid = run("interfere --grid 12 --out " + out("a"));
  EXPECT_NE(bad_grid.status, 0);
  EXPECT_EQ(json::parse(bad_grid.err)["error"]["code"], "configuration");
}
