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

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "usbeam/beamformers.hpp"
#include "usbeam/run_config.hpp"

namespace usbeam::cli {

/// Bad invocation or argument; mapped to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimulateSummary {
  std::size_t elements = 0;
  std::size_t samples = 0;
  std::size_t scatterers = 0;
  std::optional<double> realized_snr_db;  // empty when no noise was added

  std::string to_text() const;
};

SimulateSummary cmd_simulate(const RunConfig& config, const std::filesystem::path& rf_out);

struct BeamformSummary {
  BeamformerKind kind = BeamformerKind::kDas;
  std::size_t elements = 0;
  std::size_t nx = 0;
  std::size_t nz = 0;
  double time_origin = 0.0;
  FilterSpec filter;
  OpCount per_pixel;
  OpCount total;

  std::string to_text() const;
};

/// Writes the envelope image and, if `report_out` is non-empty, the report.
BeamformSummary cmd_beamform(const RunConfig& config, const std::filesystem::path& rf_in,
                             const std::filesystem::path& image_out,
                             const std::filesystem::path& report_out);

void cmd_render(const std::filesystem::path& image_in, double dynamic_range_db,
                const std::filesystem::path& pgm_out);

/// Evaluates every request in the regions file and returns the report as
/// `depth_mm,metric,value` rows. Regions file lines (lengths in mm):
///
///   snr      x= z= hw= hd=         (rectangle)
///   snr      shape=disc x= z= r=
///   fwhm     depth= x= window= [search=]
///   sidelobe depth= x= window= [search=]
///   cr       cyst_x= cyst_z= cyst_r= bck_x= bck_z= bck_r=
///
/// fwhm/sidelobe read the lateral profile of the row nearest `depth`,
/// restricted to |x' - x| <= window. With search > 0 the row is instead the
/// one with the brightest pixel in that window within depth +- search.
std::string cmd_metrics(const std::filesystem::path& image_in,
                        const std::filesystem::path& regions_in);

/// Writes `x_mm,value_db` rows of the log-compressed image row nearest
/// `depth` [m].
void cmd_profile(const std::filesystem::path& image_in, double depth, double dynamic_range_db,
                 const std::filesystem::path& csv_out);

}  // namespace usbeam::cli
