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

#include "usbeam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace usbeam {

ArrayGeometry::ArrayGeometry(std::vector<double> element_x, double pitch, double sound_speed)
    : element_x_(std::move(element_x)), pitch_(pitch), sound_speed_(sound_speed) {}

ArrayGeometry ArrayGeometry::linear(std::size_t element_count, double pitch,
                                    double sound_speed) {
  if (element_count < 2) {
    throw std::invalid_argument("array needs at least 2 elements");
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw std::invalid_argument("pitch must be positive");
  }
  if (!(sound_speed > 0.0) || !std::isfinite(sound_speed)) {
    throw std::invalid_argument("sound speed must be positive");
  }
  // (i - (M-1)/2) is a multiple of 1/2, so the layout is exactly antisymmetric.
  std::vector<double> x(element_count);
  const double centre = 0.5 * static_cast<double>(element_count - 1);
  for (std::size_t i = 0; i < element_count; ++i) {
    x[i] = (static_cast<double>(i) - centre) * pitch;
  }
  return ArrayGeometry(std::move(x), pitch, sound_speed);
}

void ImageGrid::validate() const {
  if (nx < 1 || nz < 1) {
    throw std::invalid_argument("image grid needs nx >= 1 and nz >= 1");
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(z_min) ||
      !std::isfinite(z_max)) {
    throw std::invalid_argument("image grid extents must be finite");
  }
  if (!(z_min > 0.0)) {
    throw std::invalid_argument("image grid must start below the array face (z_min > 0)");
  }
  if (x_max < x_min || z_max < z_min) {
    throw std::invalid_argument("image grid extents are reversed");
  }
  if ((nx > 1 && x_max == x_min) || (nz > 1 && z_max == z_min)) {
    throw std::invalid_argument("image grid has zero extent with more than one pixel");
  }
}

namespace {

std::size_t nearest_index(double v, double lo, double step, std::size_t n, const char* axis) {
  if (n == 1 || step == 0.0) {
    if (std::abs(v - lo) > 1e-12) {
      throw std::out_of_range(std::string(axis) + " position outside the image grid");
    }
    return 0;
  }
  const double f = (v - lo) / step;
  if (f < -0.5 || f > static_cast<double>(n - 1) + 0.5) {
    throw std::out_of_range(std::string(axis) + " position outside the image grid");
  }
  const auto idx = static_cast<long long>(std::llround(f));
  return static_cast<std::size_t>(std::clamp<long long>(idx, 0, static_cast<long long>(n - 1)));
}

}  // namespace

std::size_t ImageGrid::nearest_row(double depth) const {
  return nearest_index(depth, z_min, dz(), nz, "depth");
}

std::size_t ImageGrid::nearest_column(double x_pos) const {
  return nearest_index(x_pos, x_min, dx(), nx, "lateral");
}

double ImageGrid::axial_sample_rate(double sound_speed) const {
  if (nz < 2) {
    throw std::invalid_argument("axial sample rate needs nz >= 2");
  }
  return sound_speed / (2.0 * dz());
}

DelayTable::DelayTable(const ArrayGeometry& geometry, const ImageGrid& grid, double fs,
                       double time_origin)
    : element_x_(geometry.element_x().begin(), geometry.element_x().end()),
      grid_(grid),
      fs_(fs),
      sound_speed_(geometry.sound_speed()),
      offset_(fs * time_origin) {}

double DelayTable::at(std::size_t pixel, std::size_t element) const {
  const std::size_t ix = pixel / grid_.nz;
  const std::size_t iz = pixel % grid_.nz;
  const double x = grid_.x(ix);
  const double z = grid_.z(iz);
  return offset_ + round_trip_delay(x, z, element_x_[element], sound_speed_, fs_);
}

void DelayTable::fill(std::size_t pixel, std::span<double> out) const {
  if (out.size() != element_x_.size()) {
    throw std::invalid_argument("delay buffer size must equal the element count");
  }
  const std::size_t ix = pixel / grid_.nz;
  const std::size_t iz = pixel % grid_.nz;
  const double x = grid_.x(ix);
  const double z = grid_.z(iz);
  for (std::size_t i = 0; i < element_x_.size(); ++i) {
    out[i] = offset_ + round_trip_delay(x, z, element_x_[i], sound_speed_, fs_);
  }
}

DelayTable compute_delays(const ArrayGeometry& geometry, const ImageGrid& grid, double fs,
                          double time_origin) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw std::invalid_argument("sampling frequency must be positive");
  }
  if (!(time_origin >= 0.0) || !std::isfinite(time_origin)) {
    throw std::invalid_argument("time origin must be finite and non-negative");
  }
  grid.validate();
  return DelayTable(geometry, grid, fs, time_origin);
}

}  // namespace usbeam
