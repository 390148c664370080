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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "usbeam/beamformers.hpp"
#include "usbeam/dsp.hpp"
#include "usbeam/geometry.hpp"
#include "usbeam/rf.hpp"
#include "usbeam/simulator.hpp"

namespace usbeam {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PhantomKind { kWires, kCysts, kTumor };

/// Every knob of a simulate -> beamform -> render run. Loaded from a flat
/// `key = value` text file ('#' starts a comment); later assignments win,
/// so command-line overrides are applied with set() after loading.
///
/// Keys:
///   phantom (wires|cysts|tumor), phantom.seed, phantom.pair_separation
///   elements, pitch, c, f0, cycles, fs
///   noise.snr_db (number or "none"), noise.seed
///   grid.x_min, grid.x_max, grid.nx, grid.z_min, grid.z_max, grid.nz
///   algo (das|dmas|dmas-naive|dsdmas), t0 (seconds or "auto")
///   filter.taps, filter.center, filter.half_bandwidth
///   dynamic_range, threads
///   out.rf, out.image, out.pgm, out.report, out.profile
struct RunConfig {
  PhantomKind phantom = PhantomKind::kWires;
  std::uint64_t phantom_seed = 1;
  double pair_separation = 3e-3;

  std::size_t elements = 128;
  double pitch = 0.3e-3;
  double sound_speed = 1540.0;
  double f0 = 3e6;
  int cycles = 2;
  double fs = 100e6;

  std::optional<double> snr_db = 50.0;
  std::uint64_t noise_seed = 7;

  // 25 MHz axial sampling over 5..68 mm.
  ImageGrid grid{-12e-3, 12e-3, 5e-3, 68e-3, 241, 2048};

  BeamformerKind algo = BeamformerKind::kDsDmas;
  /// Acquisition time origin [s]; empty means the two-way pulse group delay.
  std::optional<double> time_origin;
  std::size_t filter_taps = 63;
  std::optional<double> filter_center;
  std::optional<double> filter_half_bandwidth;

  double dynamic_range_db = 70.0;
  unsigned threads = 0;

  std::string out_rf = "frame.urf";
  std::string out_image = "image.uim";
  std::string out_pgm = "image.pgm";
  std::string out_report = "report.txt";
  std::string out_profile = "profile.csv";

  /// Throws ConfigError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);

  /// Throws ConfigError unless every physical quantity is positive and the
  /// grid/filter are usable.
  void validate() const;

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  /// Canonical key = value dump, parseable by parse().
  std::string to_text() const;

  ArrayGeometry geometry() const;
  PulseModel pulse() const;
  Phantom make_phantom() const;
  /// Filter band for `kind` around the acquisition's f0, with any
  /// filter.* overrides applied.
  FilterSpec filter_for(BeamformerKind kind, const Acquisition& acq) const;
  /// t0 if set, otherwise the group delay of the round-trip pulse at the
  /// acquisition's f0/fs with this config's cycle count.
  double resolved_time_origin(const Acquisition& acq) const;
  Acquisition acquisition() const;
};

std::string_view to_string(PhantomKind kind);

}  // namespace usbeam
