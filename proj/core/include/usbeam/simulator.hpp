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
#include <vector>

#include "usbeam/geometry.hpp"
#include "usbeam/rf.hpp"

namespace usbeam {

// Single-scattering linear-array simulator.
//
// Transmit is one unfocused plane wave fired from the whole array; each
// scatterer echoes back to every element along a straight path with 1/r
// spreading on the receive leg only. There is no element directivity,
// elevation focusing or frequency-dependent attenuation.

enum class PhantomLabel { kWires, kCysts, kTumorWire, kCustom };

struct Scatterer {
  double x = 0.0;  // [m]
  double z = 0.0;  // [m]
  double amplitude = 1.0;

  bool operator==(const Scatterer&) const = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  bool contains(double x, double z) const {
    return x >= x_min && x <= x_max && z >= z_min && z <= z_max;
  }
};

struct Phantom {
  PhantomLabel label = PhantomLabel::kCustom;
  BoundingBox bounds;
  std::vector<Scatterer> scatterers;

  /// Throws std::invalid_argument if any scatterer lies outside `bounds`,
  /// has z <= 0, or has a non-finite amplitude.
  void validate() const;
};

struct CircleRegion {
  double x = 0.0;
  double z = 0.0;
  double radius = 0.0;

  bool contains(double px, double pz) const {
    const double dx = px - x;
    const double dz = pz - z;
    return dx * dx + dz * dz <= radius * radius;
  }
};

struct WirePhantomOptions {
  /// Lateral distance between the two wires of a pair [m]. The published
  /// protocol does not give it.
  double pair_separation = 3e-3;
  double pair_center_x = 0.0;
  double amplitude = 1.0;
};

/// Wire pairs at 35..60 mm (5 mm steps) plus single wires at 32 and 63 mm.
Phantom make_wire_phantom(const WirePhantomOptions& options = {});

/// Depths of the wire pairs and of the single wires, in metres.
std::vector<double> wire_pair_depths();
std::vector<double> single_wire_depths();

struct CystPhantomOptions {
  BoundingBox bounds{-12e-3, 12e-3, 4e-3, 56e-3};
  std::vector<double> depths{10e-3, 20e-3, 30e-3, 40e-3, 50e-3};
  double large_radius = 4e-3;
  double large_x = -6e-3;
  double small_radius = 2.5e-3;
  double small_x = 6e-3;
  /// Mean scatterers per (wavelength)^2 cell.
  double scatterers_per_cell = 10.0;
  double wavelength = 1540.0 / 3e6;
  std::uint64_t seed = 1;
};

/// Uniform speckle with amplitudes U[-1, 1]; scatterers falling inside a
/// cyst disc are kept with zero amplitude (anechoic).
Phantom make_cyst_phantom(const CystPhantomOptions& options = {});
std::vector<CircleRegion> cyst_regions(const CystPhantomOptions& options = {});

struct TumorPhantomOptions {
  BoundingBox bounds{-12e-3, 12e-3, 20e-3, 60e-3};
  double tumor_x = -2e-3;
  double tumor_z = 40e-3;
  double tumor_half_width = 6e-3;
  double tumor_half_depth = 4e-3;
  double tumor_gain = 4.0;
  double wire_x = 6e-3;
  double wire_z = 30e-3;
  double wire_amplitude = 10.0;
  double scatterers_per_cell = 10.0;
  double wavelength = 1540.0 / 3e6;
  std::uint64_t seed = 2;
};

/// Speckle background, an elliptical region of elevated echogenicity and a
/// single point scatterer.
Phantom make_tumor_phantom(const TumorPhantomOptions& options = {});

enum class PulseWeighting { kRectangular, kHann };

/// A windowed sinusoid of `cycles` periods at f0.
struct PulseModel {
  double f0 = 3e6;
  int cycles = 2;
  PulseWeighting weighting = PulseWeighting::kHann;

  void validate() const;
  /// Samples at rate fs, starting at t = 0.
  std::vector<double> waveform(double fs) const;
};

/// Two-way pulse: a rectangular excitation of the same f0/cycles, convolved
/// with the element impulse response once on transmit and once on receive.
/// Normalised to unit peak magnitude.
class RoundTripPulse {
 public:
  RoundTripPulse(const PulseModel& impulse_response, double fs, int oversample = 16);

  double duration() const { return duration_; }
  /// Time of the envelope centre after the pulse onset.
  double group_delay() const { return 0.5 * duration_; }
  /// p(t), zero outside [0, duration()].
  double operator()(double t) const;

 private:
  std::vector<double> table_;
  double table_rate_;
  double duration_;
};

struct SynthesisOptions {
  unsigned threads = 0;
};

/// Channel i receives sum_s a_s / r_is * p(t - (z_s + r_is) / c). The record
/// covers the latest echo plus one pulse length. Throws on an empty phantom.
RfFrame synthesize_rf(const Phantom& phantom, const ArrayGeometry& geometry,
                      const PulseModel& pulse, double fs, const SynthesisOptions& options = {});

struct NoiseSpec {
  double target_snr_db = 50.0;
  std::uint64_t seed = 0;
};

/// Mean squared sample over the signal support (samples whose magnitude
/// exceeds 1% of the frame peak). Throws for an all-zero frame.
double signal_power(const RfFrame& frame);

/// Adds white Gaussian noise with variance signal_power / 10^(snr/10).
/// Targets >= 300 dB return the input unchanged.
RfFrame add_noise(const RfFrame& frame, const NoiseSpec& spec);

/// 10 log10(signal_power(clean) / mean((noisy - clean)^2)).
double realized_snr_db(const RfFrame& clean, const RfFrame& noisy);

}  // namespace usbeam
