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

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "commands.hpp"
#include "usbeam/container.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

usbeam::RunConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
  usbeam::RunConfig cfg = path.empty() ? usbeam::RunConfig{} : usbeam::RunConfig::load(path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw usbeam::cli::UsageError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultrasound beamforming pipeline: simulate, beamform, metrics, render, profile"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "Override one configuration key (key=value), repeatable")
      ->take_all();

  std::string out;
  std::string input;

  auto* simulate = app.add_subcommand("simulate", "Synthesize an RF frame for the configured phantom");
  simulate->add_option("-o,--out", out, "RF container to write (default: out.rf)");

  std::string algo;
  std::string report;
  auto* beamform = app.add_subcommand("beamform", "Reconstruct an envelope image from an RF frame");
  beamform->add_option("rf", input, "RF container")->required();
  beamform->add_option("-a,--algo", algo, "das | dmas | dmas-naive | dsdmas (default: algo)");
  beamform->add_option("-o,--out", out, "Image container to write (default: out.image)");
  beamform->add_option("--report", report, "Report file (default: out.report)");

  double dynamic_range = 0.0;
  auto* render = app.add_subcommand("render", "Log-compress an image to an 8-bit PGM");
  render->add_option("image", input, "Image container")->required();
  render->add_option("-d,--dynamic-range", dynamic_range, "Dynamic range in dB (default: dynamic_range)");
  render->add_option("-o,--out", out, "PGM file to write (default: out.pgm)");

  std::string regions;
  auto* metrics = app.add_subcommand("metrics", "Evaluate SNR, FWHM, sidelobe and CR requests");
  metrics->add_option("image", input, "Image container")->required();
  metrics->add_option("-r,--regions", regions, "Regions file")->required();
  metrics->add_option("-o,--out", out, "CSV file to write (default: stdout)");

  double depth_mm = 0.0;
  auto* profile = app.add_subcommand("profile", "Export the lateral profile at one depth");
  profile->add_option("image", input, "Image container")->required();
  profile->add_option("--depth-mm", depth_mm, "Depth of the profile row in mm")->required();
  profile->add_option("-d,--dynamic-range", dynamic_range, "Dynamic range in dB (default: dynamic_range)");
  profile->add_option("-o,--out", out, "CSV file to write (default: out.profile)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    usbeam::RunConfig cfg = load_config(config_path, sets);
    if (!algo.empty()) cfg.set("algo", algo);
    if (dynamic_range != 0.0) cfg.dynamic_range_db = dynamic_range;
    cfg.validate();
    namespace cli = usbeam::cli;

    if (simulate->parsed()) {
      const std::string path = out.empty() ? cfg.out_rf : out;
      const auto s = cli::cmd_simulate(cfg, path);
      fmt::print("{}wrote {}\n", s.to_text(), path);
    } else if (beamform->parsed()) {
      const std::string path = out.empty() ? cfg.out_image : out;
      const std::string rep = report.empty() ? cfg.out_report : report;
      const auto s = cli::cmd_beamform(cfg, input, path, rep);
      fmt::print("{}wrote {} and {}\n", s.to_text(), path, rep);
    } else if (render->parsed()) {
      const std::string path = out.empty() ? cfg.out_pgm : out;
      cli::cmd_render(input, cfg.dynamic_range_db, path);
      fmt::print("wrote {}\n", path);
    } else if (metrics->parsed()) {
      const std::string text = cli::cmd_metrics(input, regions);
      if (out.empty()) {
        fmt::print("{}", text);
      } else {
        usbeam::write_file_atomic(out, text);
      }
    } else if (profile->parsed()) {
      const std::string path = out.empty() ? cfg.out_profile : out;
      cli::cmd_profile(input, depth_mm * 1e-3, cfg.dynamic_range_db, path);
      fmt::print("wrote {}\n", path);
    }
  } catch (const usbeam::ConfigError& e) {
    fmt::print(stderr, "usbeam: invalid configuration: {}\n", e.what());
    return kExitUsage;
  } catch (const usbeam::cli::UsageError& e) {
    fmt::print(stderr, "usbeam: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "usbeam: error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
