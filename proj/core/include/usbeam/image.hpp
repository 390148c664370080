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

#include <span>
#include <stdexcept>
#include <vector>

#include "usbeam/geometry.hpp"

namespace usbeam {

/// Real-valued image on an ImageGrid, stored line-major (each lateral
/// position is a contiguous run along depth).
struct Image {
  ImageGrid grid;
  std::vector<double> values;

  Image() = default;
  explicit Image(const ImageGrid& g) : grid(g), values(g.pixel_count(), 0.0) {}
  Image(const ImageGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.pixel_count()) {
      throw std::invalid_argument("image buffer does not match the grid");
    }
  }

  double at(std::size_t ix, std::size_t iz) const { return values[grid.pixel(ix, iz)]; }
  double& at(std::size_t ix, std::size_t iz) { return values[grid.pixel(ix, iz)]; }

  std::span<const double> line(std::size_t ix) const {
    return {values.data() + ix * grid.nz, grid.nz};
  }
  std::span<double> line(std::size_t ix) { return {values.data() + ix * grid.nz, grid.nz}; }

  /// Values of depth row iz across all lateral positions.
  std::vector<double> row(std::size_t iz) const {
    std::vector<double> r(grid.nx);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) r[ix] = at(ix, iz);
    return r;
  }

  bool operator==(const Image&) const = default;
};

}  // namespace usbeam
