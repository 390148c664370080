/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The usbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "testkit.hpp"
#include "usbeam/container.hpp"
#include "usbeam/metrics.hpp"

namespace fs = std::filesystem;
using namespace usbeam;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "usbeam_test_commands";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path at(const std::string& name) { return workdir() / name; }

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + USBEAM_CLI_PATH + "\" " + args + " > \"" +
                          at("stdout.txt").string() + "\" 2> \"" + at("stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// 64-element wire scan, lines sampled at 25 MHz over 30..66 mm.
const char* const kWireConfig =
    "phantom = wires\n"
    "elements = 64\n"
    "noise.snr_db = 50\n"
    "noise.seed = 7\n"
    "grid.x_min = -0.005\n"
    "grid.x_max = 0.005\n"
    "grid.nx = 51\n"
    "grid.z_min = 0.030\n"
    "grid.z_max = 0.066\n"
    "grid.nz = 1170\n";

fs::path wire_config() {
  const auto p = at("wires.cfg");
  if (!fs::exists(p)) write_text(p, kWireConfig);
  return p;
}

std::string cfg_arg() { return "-c \"" + wire_config().string() + "\" "; }

const fs::path& wire_rf() {
  static const fs::path p = [] {
    const auto out = at("wires.urf");
    REQUIRE(run(cfg_arg() + "simulate -o \"" + out.string() + "\"") == 0);
    return out;
  }();
  return p;
}

}  // namespace

TEST_CASE("simulate is deterministic") {
  const auto a = at("det_a.urf");
  const auto b = at("det_b.urf");
  CHECK(run(cfg_arg() + "simulate -o \"" + a.string() + "\"") == 0);
  CHECK(slurp(at("stdout.txt")).find("elements = 64") != std::string::npos);
  CHECK(run(cfg_arg() + "simulate -o \"" + b.string() + "\"") == 0);
  CHECK(slurp(a) == slurp(b));

  const auto frame = read_rf(a);
  CHECK(frame.element_count() == 64);
  CHECK(fs::file_size(a) == 64 + 4 * 64 * frame.sample_count());
}

TEST_CASE("dmas and dmas-naive produce the same image") {
  const auto fast = at("fast.uim");
  const auto naive = at("naive.uim");
  CHECK(run(cfg_arg() + "beamform \"" + wire_rf().string() + "\" -a dmas -o \"" + fast.string() +
            "\" --report \"" + at("fast.txt").string() + "\"") == 0);
  CHECK(run(cfg_arg() + "beamform \"" + wire_rf().string() + "\" -a dmas-naive -o \"" +
            naive.string() + "\" --report \"" + at("naive.txt").string() + "\"") == 0);
  const auto a = read_image(fast);
  const auto b = read_image(naive);
  REQUIRE(a.values.size() == b.values.size());
  double peak = 0.0;
  for (double v : b.values) peak = std::max(peak, std::abs(v));
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-9 * (1.0 + std::abs(b.values[k])) + 1e-7 * peak);
  }
  CHECK(slurp(at("fast.txt")).find("ops_per_pixel = 2142\n") != std::string::npos);
}

TEST_CASE("report for a 128-element ds-dmas run") {
  const auto cfg = at("m128.cfg");
  write_text(cfg,
             "elements = 128\n"
             "grid.x_min = -0.001\ngrid.x_max = 0.001\ngrid.nx = 3\n"
             "grid.z_min = 0.033\ngrid.z_max = 0.037\ngrid.nz = 200\n");
  const auto rf = at("m128.urf");
  REQUIRE(run("-c \"" + cfg.string() + "\" simulate -o \"" + rf.string() + "\"") == 0);
  const auto report = at("m128.txt");
  CHECK(run("-c \"" + cfg.string() + "\" beamform \"" + rf.string() + "\" -a dsdmas -o \"" +
            at("m128.uim").string() + "\" --report \"" + report.string() + "\"") == 0);
  const auto text = slurp(report);
  CHECK(text.find("algo = dsdmas\n") != std::string::npos);
  CHECK(text.find("elements = 128\n") != std::string::npos);
  CHECK(text.find("ops_per_pixel = 16637\n") != std::string::npos);
  CHECK(text.find("ops_total = " + std::to_string(16637 * 600) + "\n") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run(cfg_arg() + "beamform \"" + wire_rf().string() + "\" -a mv") == 2);
  CHECK(slurp(at("stderr.txt")).find("mv") != std::string::npos);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--set elements=1 simulate -o \"" + at("x.urf").string() + "\"") == 2);
  CHECK(run("--set nonsense=1 simulate") == 2);
  CHECK(run("--set elements simulate") == 2);
  CHECK(run("profile \"" + at("x.uim").string() + "\"") == 2);
  // 600 rows over 36 mm cannot carry the 2 f0 band.
  CHECK(run(cfg_arg() + "--set grid.nz=600 beamform \"" + wire_rf().string() + "\" -o \"" +
            at("y.uim").string() + "\"") == 2);
  CHECK(slurp(at("stderr.txt")).find("grid.nz") != std::string::npos);
}

TEST_CASE("runtime errors exit with 1") {
  const auto cfg = at("m2.cfg");
  write_text(cfg, std::string(kWireConfig) + "elements = 2\n");
  const auto rf = at("m2.urf");
  REQUIRE(run("-c \"" + cfg.string() + "\" simulate -o \"" + rf.string() + "\"") == 0);
  CHECK(run("-c \"" + cfg.string() + "\" beamform \"" + rf.string() + "\" -a dsdmas -o \"" +
            at("m2.uim").string() + "\"") == 1);
  const auto err = slurp(at("stderr.txt"));
  CHECK(err.find("dsdmas requires M >= 3") != std::string::npos);
  CHECK(err.find("M = 2") != std::string::npos);

  CHECK(run("render \"" + at("missing.uim").string() + "\" -o \"" + at("m.pgm").string() + "\"") ==
        1);
  CHECK(run("render \"" + wire_rf().string() + "\" -o \"" + at("m.pgm").string() + "\"") == 1);
}

TEST_CASE("render, profile and metrics") {
  const auto image = at("render.uim");
  REQUIRE(run(cfg_arg() + "beamform \"" + wire_rf().string() + "\" -a dsdmas -o \"" +
              image.string() + "\" --report \"" + at("render.txt").string() + "\"") == 0);
  const auto env = read_image(image);

  const auto pgm = at("render.pgm");
  CHECK(run("render \"" + image.string() + "\" -d 60 -o \"" + pgm.string() + "\"") == 0);
  const auto expected = encode_pgm(log_compress(env, 60.0));
  CHECK(slurp(pgm) == std::string(expected.begin(), expected.end()));

  const auto csv = at("profile.csv");
  CHECK(run("profile \"" + image.string() + "\" --depth-mm 35 -o \"" + csv.string() + "\"") == 0);
  std::istringstream rows(slurp(csv));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "x_mm,value_db");
  const auto ref = lateral_profile(log_compress(env, 70.0), 35e-3);
  std::size_t n = 0;
  double top = -1e300;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double x_mm = std::stod(line.substr(0, comma));
    const double db = std::stod(line.substr(comma + 1));
    REQUIRE(n < ref.x.size());
    CHECK(x_mm == ref.x[n] / 1e-3);
    CHECK(db == ref.value_db[n]);
    top = std::max(top, db);
    ++n;
  }
  CHECK(n == env.grid.nx);
  CHECK(top == 0.0);
  CHECK(run("profile \"" + image.string() + "\" --depth-mm 80 -o \"" + csv.string() + "\"") == 1);

  const auto regions = at("regions.txt");
  write_text(regions,
             "# right wire of the 35 mm pair\n"
             "fwhm depth=35 x=1.5 window=1.5 search=1\n"
             "sidelobe depth=35 x=3 window=3 search=1\n"
             "snr x=3 z=45 hw=1.5 hd=2\n"
             "cr cyst_x=-2 cyst_z=40 cyst_r=1 bck_x=-2 bck_z=40 bck_r=1\n"
             "cr cyst_x=-3 cyst_z=50 cyst_r=1 bck_x=2 bck_z=50 bck_r=1.5\n");
  const auto report = at("metrics.csv");
  CHECK(run("metrics \"" + image.string() + "\" -r \"" + regions.string() + "\" -o \"" +
            report.string() + "\"") == 0);
  const auto first = slurp(report);
  CHECK(run("metrics \"" + image.string() + "\" -r \"" + regions.string() + "\"") == 0);
  CHECK(slurp(at("stdout.txt")) == first);

  std::istringstream lines(first);
  std::vector<std::string> got;
  while (std::getline(lines, line)) got.push_back(line);
  REQUIRE(got.size() == 6);
  CHECK(got[0] == "depth_mm,metric,value");
  CHECK(got[1].rfind("35,fwhm_mm,", 0) == 0);
  CHECK(got[2].rfind("35,sidelobe_db,", 0) == 0);
  CHECK(got[3].rfind("45,snr_db,", 0) == 0);
  CHECK(got[4] == "40,cr_db,0");

  // Independent two-pass means over the disc pixels.
  std::vector<double> cyst;
  std::vector<double> bck;
  const auto& g = env.grid;
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
      const double x = g.x(ix);
      const double z = g.z(iz);
      if (std::hypot(x + 3e-3, z - 50e-3) <= 1e-3) cyst.push_back(env.at(ix, iz));
      if (std::hypot(x - 2e-3, z - 50e-3) <= 1.5e-3) bck.push_back(env.at(ix, iz));
    }
  }
  const double want = 20.0 * std::log10(testkit::mean(cyst) / testkit::mean(bck));
  REQUIRE(got[5].rfind("50,cr_db,", 0) == 0);
  CHECK(std::abs(std::stod(got[5].substr(9)) - want) <= 1e-9);

  write_text(at("bad_regions.txt"), "cr cyst_x=-9 cyst_z=50 cyst_r=3 bck_x=0 bck_z=50 bck_r=1\n");
  CHECK(run("metrics \"" + image.string() + "\" -r \"" + at("bad_regions.txt").string() + "\"") ==
        1);
  write_text(at("bad_regions.txt"), "cnr x=1\n");
  CHECK(run("metrics \"" + image.string() + "\" -r \"" + at("bad_regions.txt").string() + "\"") ==
        2);
}

TEST_CASE("full pipeline reproduces byte-identical artifacts") {
  std::vector<std::string> runs;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string tag = "pipe" + std::to_string(pass);
    const auto rf = at(tag + ".urf");
    const auto image = at(tag + ".uim");
    const auto report = at(tag + ".txt");
    REQUIRE(run(cfg_arg() + "--set noise.seed=11 simulate -o \"" + rf.string() + "\"") == 0);
    REQUIRE(run(cfg_arg() + "beamform \"" + rf.string() + "\" -a dsdmas -o \"" + image.string() +
                "\" --report \"" + report.string() + "\"") == 0);
    write_text(at("pipe_regions.txt"), "fwhm depth=40 x=1.5 window=1.5 search=1\n");
    REQUIRE(run("metrics \"" + image.string() + "\" -r \"" + at("pipe_regions.txt").string() +
                "\"") == 0);
    runs.push_back(slurp(rf) + slurp(image) + slurp(report) + slurp(at("stdout.txt")));
  }
  CHECK(runs[0] == runs[1]);
}

TEST_CASE("commands library surfaces the same contracts") {
  RunConfig cfg = RunConfig::parse(kWireConfig);
  cfg.set("elements", "8");
  cfg.set("grid.nx", "5");
  const auto rf = at("lib.urf");
  const auto s = cli::cmd_simulate(cfg, rf);
  CHECK(s.elements == 8);
  REQUIRE(s.realized_snr_db.has_value());
  CHECK(std::abs(*s.realized_snr_db - 50.0) <= 0.5);

  cfg.set("algo", "das");
  const auto b = cli::cmd_beamform(cfg, rf, at("lib.uim"), {});
  CHECK(b.per_pixel.total == 8);
  CHECK(b.filter.center == 3e6);
  CHECK(b.time_origin == cfg.resolved_time_origin(cfg.acquisition()));
  CHECK_FALSE(fs::exists(at("lib_report.txt")));
  CHECK_THROWS_AS(cli::cmd_render(at("lib.uim"), 0.0, at("lib.pgm")), cli::UsageError);
}
