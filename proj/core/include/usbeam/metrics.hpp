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

#include <cstddef>
#include <span>
#include <vector>

#include "usbeam/dsp.hpp"
#include "usbeam/image.hpp"

namespace usbeam {

enum class RegionShape { kRect, kDisc };

/// Axis-aligned rectangle (half-widths) or disc (radius) in image coordinates.
struct RegionSpec {
  RegionShape shape = RegionShape::kRect;
  double x = 0.0;
  double z = 0.0;
  double half_width = 0.0;  // rect: lateral half-width; disc: radius
  double half_depth = 0.0;  // rect only

  static RegionSpec rect(double x, double z, double half_width, double half_depth) {
    return {RegionShape::kRect, x, z, half_width, half_depth};
  }
  static RegionSpec disc(double x, double z, double radius) {
    return {RegionShape::kDisc, x, z, radius, radius};
  }

  bool contains(double px, double pz) const;

  /// Throws std::out_of_range unless the region lies fully inside the grid.
  void require_inside(const ImageGrid& grid) const;
};

/// Pixel values whose centres fall inside the region.
std::vector<double> region_values(const Image& image, const RegionSpec& region);

/// 20 log10((max - min) / std) over the region, on envelope (pre-log)
/// values, with the population standard deviation. Throws
/// std::invalid_argument for fewer than 2 pixels or zero variance.
double snr_region(const Image& envelope_image, const RegionSpec& region);

/// 20 log10(mean_cyst / mean_background). Returns -infinity when the cyst
/// mean is zero; throws std::invalid_argument when the background mean is
/// not positive or either region is empty.
double contrast_ratio(const Image& envelope_image, const RegionSpec& cyst,
                      const RegionSpec& background);

/// One image row in dB, renormalised so that its maximum is 0 dB.
struct LateralProfile {
  double requested_depth = 0.0;
  double depth = 0.0;  // depth of the selected row
  std::size_t row = 0;
  std::vector<double> x;
  std::vector<double> value_db;

  /// Distance between the requested depth and the selected row.
  double depth_error() const { return depth - requested_depth; }

  /// Sub-profile over |x - centre| <= half_width, renormalised to 0 dB.
  LateralProfile window(double centre, double half_width) const;
};

/// Row nearest to `depth`; throws std::out_of_range outside the grid.
LateralProfile lateral_profile(const DbImage& image, double depth);

/// Same, taken straight from an envelope image; each row is converted with
/// its own maximum as reference and floored at -floor_db.
LateralProfile lateral_profile(const Image& envelope_image, double depth, double floor_db = 300.0);

/// Full width at half maximum [m] of a dB profile: the distance between the
/// -6.02 dB crossings on either side of the peak, linearly interpolated.
/// Throws std::domain_error if the peak touches either end or a side never
/// crosses the threshold.
double fwhm(const LateralProfile& profile);

/// Same contract on linear amplitudes (crossing at 0.5 x peak).
double fwhm_linear(std::span<const double> x, std::span<const double> amplitude);

/// Highest level [dB] outside the main lobe. The main lobe extends to the
/// first local minimum on each side of the peak, located on a 3-sample
/// moving average. Returns -infinity if nothing lies outside the main lobe.
/// Propagates fwhm() errors.
double sidelobe_level(const LateralProfile& profile);

}  // namespace usbeam
