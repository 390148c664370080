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

#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "usbeam/container.hpp"
#include "usbeam/metrics.hpp"
#include "usbeam/pipeline.hpp"
#include "usbeam/simulator.hpp"

namespace usbeam::cli {

std::string SimulateSummary::to_text() const {
  std::string s = fmt::format("elements = {}\nsamples = {}\nscatterers = {}\n", elements, samples,
                              scatterers);
  if (realized_snr_db) {
    s += fmt::format("realized_snr_db = {:.3f}\n", *realized_snr_db);
  } else {
    s += "realized_snr_db = none\n";
  }
  return s;
}

SimulateSummary cmd_simulate(const RunConfig& config, const std::filesystem::path& rf_out) {
  config.validate();
  const Phantom phantom = config.make_phantom();
  const RfFrame clean = synthesize_rf(phantom, config.geometry(), config.pulse(), config.fs,
                                      SynthesisOptions{config.threads});
  SimulateSummary summary;
  summary.elements = clean.element_count();
  summary.samples = clean.sample_count();
  summary.scatterers = phantom.scatterers.size();
  if (config.snr_db) {
    const RfFrame noisy = add_noise(clean, NoiseSpec{*config.snr_db, config.noise_seed});
    summary.realized_snr_db = realized_snr_db(clean, noisy);
    write_rf(rf_out, noisy);
  } else {
    write_rf(rf_out, clean);
  }
  return summary;
}

std::string BeamformSummary::to_text() const {
  return fmt::format(
      "algo = {}\n"
      "elements = {}\n"
      "grid = {} x {}\n"
      "t0_s = {}\n"
      "filter = {} Hz +- {} Hz, {} taps\n"
      "ops_per_pixel = {}\n"
      "multiplies_per_pixel = {}\n"
      "special_ops_per_pixel = {}\n"
      "ops_total = {}\n",
      to_string(kind), elements, nx, nz, time_origin, filter.center, filter.half_bandwidth,
      filter.taps, per_pixel.total, per_pixel.multiplies, per_pixel.special_ops, total.total);
}

BeamformSummary cmd_beamform(const RunConfig& config, const std::filesystem::path& rf_in,
                             const std::filesystem::path& image_out,
                             const std::filesystem::path& report_out) {
  config.validate();
  const RfFrame frame = read_rf(rf_in);
  const auto& acq = frame.acquisition();
  const std::size_t need = min_elements(config.algo);
  if (frame.element_count() < need) {
    throw std::invalid_argument(fmt::format("{} requires M >= {} elements; '{}' has M = {}",
                                            to_string(config.algo), need, rf_in.string(),
                                            frame.element_count()));
  }
  BeamformSummary s;
  s.kind = config.algo;
  s.elements = frame.element_count();
  s.nx = config.grid.nx;
  s.nz = config.grid.nz;
  s.time_origin = config.resolved_time_origin(acq);
  s.filter = config.filter_for(config.algo, acq);
  const double axial_fs = config.grid.axial_sample_rate(acq.sound_speed);
  try {
    s.filter.validate(axial_fs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}; the grid samples each line at {:.4g} MHz, raise grid.nz",
                                  e.what(), axial_fs / 1e6));
  }

  const auto rec = reconstruct(frame, config.grid, config.algo, s.filter,
                               ReconstructOptions{s.time_origin, config.threads});
  s.per_pixel = rec.per_pixel;
  s.total = rec.total;
  write_image(image_out, rec.envelope);
  if (!report_out.empty()) write_file_atomic(report_out, s.to_text());
  return s;
}

void cmd_render(const std::filesystem::path& image_in, double dynamic_range_db,
                const std::filesystem::path& pgm_out) {
  if (!(dynamic_range_db > 0.0)) throw UsageError("dynamic range must be positive");
  const Image image = read_image(image_in);
  write_file_atomic(pgm_out, encode_pgm(log_compress(image, dynamic_range_db)));
}

namespace {

struct RegionRequest {
  std::string kind;
  std::map<std::string, double> args;
  std::size_t line = 0;

  double get(const std::string& key) const {
    const auto it = args.find(key);
    if (it == args.end()) {
      throw ConfigError(fmt::format("regions line {}: '{}' needs {}=", line, kind, key));
    }
    return it->second;
  }
  double get_or(const std::string& key, double fallback) const {
    const auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  }
};

std::vector<RegionRequest> parse_regions(const std::string& text) {
  std::vector<RegionRequest> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream words(raw);
    RegionRequest req;
    req.line = line_no;
    if (!(words >> req.kind)) continue;
    static const std::vector<std::string> kinds{"snr", "fwhm", "sidelobe", "cr"};
    if (std::find(kinds.begin(), kinds.end(), req.kind) == kinds.end()) {
      throw ConfigError(fmt::format("regions line {}: unknown metric '{}'", line_no, req.kind));
    }
    std::string tok;
    while (words >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError(fmt::format("regions line {}: expected key=value, got '{}'", line_no, tok));
      }
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "shape") {
        if (value != "rect" && value != "disc") {
          throw ConfigError(fmt::format("regions line {}: shape must be rect or disc", line_no));
        }
        req.args["disc"] = value == "disc" ? 1.0 : 0.0;
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) {
        throw ConfigError(fmt::format("regions line {}: '{}' is not a number", line_no, value));
      }
      req.args[key] = v;
    }
    out.push_back(std::move(req));
  }
  return out;
}

constexpr double kMm = 1e-3;

LateralProfile target_profile(const Image& env, const RegionRequest& req) {
  const double depth = req.get("depth") * kMm;
  const double x = req.get("x") * kMm;
  const double window = req.get("window") * kMm;
  const double search = req.get_or("search", 0.0) * kMm;
  const auto& g = env.grid;
  double row_depth = depth;
  if (search > 0.0) {
    const std::size_t lo = g.nearest_row(std::max(g.z_min, depth - search));
    const std::size_t hi = g.nearest_row(std::min(g.z_max, depth + search));
    double best = -1.0;
    for (std::size_t iz = lo; iz <= hi; ++iz) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        if (std::abs(g.x(ix) - x) <= window && env.at(ix, iz) > best) {
          best = env.at(ix, iz);
          row_depth = g.z(iz);
        }
      }
    }
  }
  return lateral_profile(env, row_depth).window(x, window);
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

std::string cmd_metrics(const std::filesystem::path& image_in,
                        const std::filesystem::path& regions_in) {
  const auto bytes = read_file(regions_in);
  const auto requests = parse_regions(std::string(bytes.begin(), bytes.end()));
  if (requests.empty()) throw ConfigError("regions file lists no metrics");
  const Image env = read_image(image_in);

  std::string out = "depth_mm,metric,value\n";
  for (const auto& req : requests) {
    if (req.kind == "snr") {
      const bool disc = req.get_or("disc", 0.0) != 0.0;
      const double x = req.get("x") * kMm;
      const double z = req.get("z") * kMm;
      const RegionSpec region = disc ? RegionSpec::disc(x, z, req.get("r") * kMm)
                                     : RegionSpec::rect(x, z, req.get("hw") * kMm,
                                                        req.get("hd") * kMm);
      out += fmt::format("{},snr_db,{}\n", num(req.get("z")), num(snr_region(env, region)));
    } else if (req.kind == "fwhm") {
      const double w = fwhm(target_profile(env, req)) / kMm;
      out += fmt::format("{},fwhm_mm,{}\n", num(req.get("depth")), num(w));
    } else if (req.kind == "sidelobe") {
      const double sl = sidelobe_level(target_profile(env, req));
      out += fmt::format("{},sidelobe_db,{}\n", num(req.get("depth")), num(sl));
    } else {
      const auto cyst = RegionSpec::disc(req.get("cyst_x") * kMm, req.get("cyst_z") * kMm,
                                         req.get("cyst_r") * kMm);
      const auto bck = RegionSpec::disc(req.get("bck_x") * kMm, req.get("bck_z") * kMm,
                                        req.get("bck_r") * kMm);
      out += fmt::format("{},cr_db,{}\n", num(req.get("cyst_z")),
                         num(contrast_ratio(env, cyst, bck)));
    }
  }
  return out;
}

void cmd_profile(const std::filesystem::path& image_in, double depth, double dynamic_range_db,
                 const std::filesystem::path& csv_out) {
  if (!(dynamic_range_db > 0.0)) throw UsageError("dynamic range must be positive");
  const Image env = read_image(image_in);
  const auto profile = lateral_profile(log_compress(env, dynamic_range_db), depth);
  std::string out = "x_mm,value_db\n";
  for (std::size_t i = 0; i < profile.x.size(); ++i) {
    out += fmt::format("{},{}\n", profile.x[i] / kMm, profile.value_db[i]);
  }
  write_file_atomic(csv_out, out);
}

}  // namespace usbeam::cli
