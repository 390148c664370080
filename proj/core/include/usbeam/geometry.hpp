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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace usbeam {

/// Linear transducer array. Element centres are uniformly spaced and
/// centred on x = 0; the array face lies on z = 0 and z grows with depth.
class ArrayGeometry {
 public:
  /// Builds an M-element array with the given pitch [m] and sound speed [m/s].
  /// Throws std::invalid_argument if M < 2, pitch <= 0 or sound_speed <= 0.
  static ArrayGeometry linear(std::size_t element_count, double pitch, double sound_speed);

  std::size_t element_count() const { return element_x_.size(); }
  double pitch() const { return pitch_; }
  double sound_speed() const { return sound_speed_; }
  std::span<const double> element_x() const { return element_x_; }
  double element_x(std::size_t i) const { return element_x_[i]; }

  /// Lateral half-width of the aperture (centre of the outermost element).
  double half_aperture() const { return element_x_.back(); }

 private:
  ArrayGeometry(std::vector<double> element_x, double pitch, double sound_speed);

  std::vector<double> element_x_;
  double pitch_;
  double sound_speed_;
};

/// Regular pixel lattice. Lines run along z (one line per lateral position);
/// pixels are indexed line-major: p = ix * nz + iz.
struct ImageGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t nx = 1;
  std::size_t nz = 1;

  /// Throws std::invalid_argument on empty grids, reversed extents or z_min <= 0.
  void validate() const;

  double dx() const { return nx > 1 ? (x_max - x_min) / static_cast<double>(nx - 1) : 0.0; }
  double dz() const { return nz > 1 ? (z_max - z_min) / static_cast<double>(nz - 1) : 0.0; }
  double x(std::size_t ix) const { return x_min + static_cast<double>(ix) * dx(); }
  double z(std::size_t iz) const { return z_min + static_cast<double>(iz) * dz(); }
  std::size_t pixel_count() const { return nx * nz; }
  std::size_t pixel(std::size_t ix, std::size_t iz) const { return ix * nz + iz; }

  /// Row (depth index) nearest to `depth`; throws std::out_of_range when the
  /// depth lies outside [z_min, z_max] by more than half a row.
  std::size_t nearest_row(double depth) const;
  /// Column nearest to lateral position `x`, same contract as nearest_row.
  std::size_t nearest_column(double x) const;

  /// Sampling rate [Hz] of a beamformed line, i.e. c / (2 dz).
  double axial_sample_rate(double sound_speed) const;

  bool operator==(const ImageGrid&) const = default;
};

/// Round-trip delay in samples from the array face to (x, z) and back to the
/// element at `element_x`.
inline double round_trip_delay(double x, double z, double element_x, double sound_speed,
                               double fs) {
  const double lateral = x - element_x;
  return fs * (z / sound_speed + std::sqrt(lateral * lateral + z * z) / sound_speed);
}

/// Fractional round-trip delays in samples for every (pixel, element) pair.
///
/// d[p][i] = fs * (t0 + z_p / c + sqrt((x_p - x_i)^2 + z_p^2) / c)
///
/// t0 is the acquisition time origin: the lag between the nominal echo
/// time and the pulse centre, normally the two-way pulse group delay.
/// Leaving it at zero focuses on the pulse onset instead, which biases
/// off-axis focusing because the lag maps onto each element's path with a
/// different obliquity.
///
/// Transmit is modelled as straight axial travel and receive as the exact
/// Euclidean return path. The table is a closed form over (grid, geometry,
/// fs); entries are evaluated on access so that memory stays O(M + P)
/// instead of O(M * P).
class DelayTable {
 public:
  DelayTable(const ArrayGeometry& geometry, const ImageGrid& grid, double fs,
             double time_origin = 0.0);

  std::size_t pixel_count() const { return grid_.pixel_count(); }
  std::size_t element_count() const { return element_x_.size(); }
  const ImageGrid& grid() const { return grid_; }
  double sample_rate() const { return fs_; }
  double sound_speed() const { return sound_speed_; }
  double time_origin() const { return offset_ / fs_; }

  double at(std::size_t pixel, std::size_t element) const;

  /// Writes the M delays of `pixel` into `out` (size must equal M).
  void fill(std::size_t pixel, std::span<double> out) const;

 private:
  std::vector<double> element_x_;
  ImageGrid grid_;
  double fs_;
  double sound_speed_;
  double offset_;  // fs * t0
};

/// Throws std::invalid_argument for fs <= 0, a negative time origin or an
/// invalid grid.
DelayTable compute_delays(const ArrayGeometry& geometry, const ImageGrid& grid, double fs,
                          double time_origin = 0.0);

}  // namespace usbeam
