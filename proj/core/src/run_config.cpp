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

#include "usbeam/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace usbeam {

std::string_view to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::kWires:
      return "wires";
    case PhantomKind::kCysts:
      return "cysts";
    case PhantomKind::kTumor:
      return "tumor";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  // std::from_chars for double is not available on every toolchain we build on.
  std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(out)) {
    throw ConfigError("'" + std::string(key) + "': expected a number, got '" + s + "'");
  }
  return out;
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError("'" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "phantom") {
    if (v == "wires") {
      phantom = PhantomKind::kWires;
    } else if (v == "cysts") {
      phantom = PhantomKind::kCysts;
    } else if (v == "tumor") {
      phantom = PhantomKind::kTumor;
    } else {
      throw ConfigError("unknown phantom '" + std::string(v) + "' (wires|cysts|tumor)");
    }
  } else if (key == "phantom.seed") {
    phantom_seed = parse_unsigned<std::uint64_t>(key, v);
  } else if (key == "phantom.pair_separation") {
    pair_separation = parse_double(key, v);
  } else if (key == "elements") {
    elements = parse_unsigned<std::size_t>(key, v);
  } else if (key == "pitch") {
    pitch = parse_double(key, v);
  } else if (key == "c") {
    sound_speed = parse_double(key, v);
  } else if (key == "f0") {
    f0 = parse_double(key, v);
  } else if (key == "cycles") {
    cycles = static_cast<int>(parse_unsigned<unsigned>(key, v));
  } else if (key == "fs") {
    fs = parse_double(key, v);
  } else if (key == "noise.snr_db") {
    if (v == "none") {
      snr_db.reset();
    } else {
      snr_db = parse_double(key, v);
    }
  } else if (key == "noise.seed") {
    noise_seed = parse_unsigned<std::uint64_t>(key, v);
  } else if (key == "grid.x_min") {
    grid.x_min = parse_double(key, v);
  } else if (key == "grid.x_max") {
    grid.x_max = parse_double(key, v);
  } else if (key == "grid.z_min") {
    grid.z_min = parse_double(key, v);
  } else if (key == "grid.z_max") {
    grid.z_max = parse_double(key, v);
  } else if (key == "grid.nx") {
    grid.nx = parse_unsigned<std::size_t>(key, v);
  } else if (key == "grid.nz") {
    grid.nz = parse_unsigned<std::size_t>(key, v);
  } else if (key == "algo") {
    const auto kind = parse_beamformer(v);
    if (!kind) {
      throw ConfigError("unknown beamformer '" + std::string(v) +
                        "' (das|dmas|dmas-naive|dsdmas)");
    }
    algo = *kind;
  } else if (key == "t0") {
    if (v == "auto") {
      time_origin.reset();
    } else {
      time_origin = parse_double(key, v);
    }
  } else if (key == "filter.taps") {
    filter_taps = parse_unsigned<std::size_t>(key, v);
  } else if (key == "filter.center") {
    filter_center = parse_double(key, v);
  } else if (key == "filter.half_bandwidth") {
    filter_half_bandwidth = parse_double(key, v);
  } else if (key == "dynamic_range") {
    dynamic_range_db = parse_double(key, v);
  } else if (key == "threads") {
    threads = parse_unsigned<unsigned>(key, v);
  } else if (key == "out.rf") {
    out_rf = std::string(v);
  } else if (key == "out.image") {
    out_image = std::string(v);
  } else if (key == "out.pgm") {
    out_pgm = std::string(v);
  } else if (key == "out.report") {
    out_report = std::string(v);
  } else if (key == "out.profile") {
    out_profile = std::string(v);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(pitch, "pitch");
  positive(sound_speed, "c");
  positive(f0, "f0");
  positive(fs, "fs");
  positive(pair_separation, "phantom.pair_separation");
  positive(dynamic_range_db, "dynamic_range");
  if (cycles < 1) throw ConfigError("cycles must be >= 1");
  if (elements < 2) throw ConfigError("elements must be >= 2");
  if (elements > 65535) throw ConfigError("elements must fit the RF container (<= 65535)");
  if (!(fs > 2.0 * f0)) throw ConfigError("fs must exceed 2 * f0");
  if (grid.nx > 65535) throw ConfigError("grid.nx must fit the image container (<= 65535)");
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (time_origin && *time_origin < 0.0) throw ConfigError("t0 must be non-negative");
  if (filter_center) positive(*filter_center, "filter.center");
  if (filter_half_bandwidth) positive(*filter_half_bandwidth, "filter.half_bandwidth");
  if (filter_taps < 3 || filter_taps % 2 == 0) throw ConfigError("filter.taps must be odd and >= 3");
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "phantom = " << to_string(phantom) << '\n'
     << "phantom.seed = " << phantom_seed << '\n'
     << "phantom.pair_separation = " << fmt(pair_separation) << '\n'
     << "elements = " << elements << '\n'
     << "pitch = " << fmt(pitch) << '\n'
     << "c = " << fmt(sound_speed) << '\n'
     << "f0 = " << fmt(f0) << '\n'
     << "cycles = " << cycles << '\n'
     << "fs = " << fmt(fs) << '\n'
     << "noise.snr_db = " << (snr_db ? fmt(*snr_db) : std::string("none")) << '\n'
     << "noise.seed = " << noise_seed << '\n'
     << "grid.x_min = " << fmt(grid.x_min) << '\n'
     << "grid.x_max = " << fmt(grid.x_max) << '\n'
     << "grid.nx = " << grid.nx << '\n'
     << "grid.z_min = " << fmt(grid.z_min) << '\n'
     << "grid.z_max = " << fmt(grid.z_max) << '\n'
     << "grid.nz = " << grid.nz << '\n'
     << "algo = " << to_string(algo) << '\n'
     << "t0 = " << (time_origin ? fmt(*time_origin) : std::string("auto")) << '\n'
     << "filter.taps = " << filter_taps << '\n';
  if (filter_center) os << "filter.center = " << fmt(*filter_center) << '\n';
  if (filter_half_bandwidth) os << "filter.half_bandwidth = " << fmt(*filter_half_bandwidth) << '\n';
  os << "dynamic_range = " << fmt(dynamic_range_db) << '\n'
     << "threads = " << threads << '\n'
     << "out.rf = " << out_rf << '\n'
     << "out.image = " << out_image << '\n'
     << "out.pgm = " << out_pgm << '\n'
     << "out.report = " << out_report << '\n'
     << "out.profile = " << out_profile << '\n';
  return os.str();
}

ArrayGeometry RunConfig::geometry() const {
  return ArrayGeometry::linear(elements, pitch, sound_speed);
}

PulseModel RunConfig::pulse() const { return PulseModel{f0, cycles, PulseWeighting::kHann}; }

Phantom RunConfig::make_phantom() const {
  switch (phantom) {
    case PhantomKind::kWires: {
      WirePhantomOptions o;
      o.pair_separation = pair_separation;
      return make_wire_phantom(o);
    }
    case PhantomKind::kCysts: {
      CystPhantomOptions o;
      o.seed = phantom_seed;
      o.wavelength = sound_speed / f0;
      return make_cyst_phantom(o);
    }
    case PhantomKind::kTumor: {
      TumorPhantomOptions o;
      o.seed = phantom_seed;
      o.wavelength = sound_speed / f0;
      return make_tumor_phantom(o);
    }
  }
  throw ConfigError("unknown phantom");
}

FilterSpec RunConfig::filter_for(BeamformerKind kind, const Acquisition& acq) const {
  FilterSpec spec = FilterSpec::for_beamformer(kind, acq.f0);
  if (filter_center) spec.center = *filter_center;
  if (filter_half_bandwidth) spec.half_bandwidth = *filter_half_bandwidth;
  spec.taps = filter_taps;
  return spec;
}

double RunConfig::resolved_time_origin(const Acquisition& acq) const {
  if (time_origin) return *time_origin;
  return RoundTripPulse(PulseModel{acq.f0, cycles, PulseWeighting::kHann}, acq.fs).group_delay();
}

Acquisition RunConfig::acquisition() const { return {fs, f0, sound_speed, pitch}; }

}  // namespace usbeam
