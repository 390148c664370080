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

#include "usbeam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace usbeam {

bool RegionSpec::contains(double px, double pz) const {
  const double dx = px - x;
  const double dz = pz - z;
  if (shape == RegionShape::kDisc) {
    return dx * dx + dz * dz <= half_width * half_width;
  }
  return std::abs(dx) <= half_width && std::abs(dz) <= half_depth;
}

void RegionSpec::require_inside(const ImageGrid& grid) const {
  const double hz = shape == RegionShape::kDisc ? half_width : half_depth;
  if (!(half_width > 0.0) || !(hz > 0.0)) {
    throw std::out_of_range("region extent must be positive");
  }
  constexpr double kSlack = 1e-12;
  if (x - half_width < grid.x_min - kSlack || x + half_width > grid.x_max + kSlack ||
      z - hz < grid.z_min - kSlack || z + hz > grid.z_max + kSlack) {
    throw std::out_of_range("region extends outside the image grid");
  }
}

std::vector<double> region_values(const Image& image, const RegionSpec& region) {
  region.require_inside(image.grid);
  const auto& g = image.grid;
  std::vector<double> values;
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    const double px = g.x(ix);
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
      if (region.contains(px, g.z(iz))) values.push_back(image.at(ix, iz));
    }
  }
  return values;
}

double snr_region(const Image& envelope_image, const RegionSpec& region) {
  const auto v = region_values(envelope_image, region);
  if (v.size() < 2) {
    throw std::invalid_argument("SNR region needs at least 2 pixels");
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double s : v) mean += s;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double s : v) var += (s - mean) * (s - mean);
  var /= static_cast<double>(v.size());
  if (!(var > 0.0)) {
    throw std::invalid_argument("SNR region has zero variance");
  }
  return 20.0 * std::log10((*hi - *lo) / std::sqrt(var));
}

double contrast_ratio(const Image& envelope_image, const RegionSpec& cyst,
                      const RegionSpec& background) {
  auto mean_of = [&](const RegionSpec& r, const char* what) {
    const auto v = region_values(envelope_image, r);
    if (v.empty()) {
      throw std::invalid_argument(std::string(what) + " region contains no pixels");
    }
    double m = 0.0;
    for (double s : v) m += s;
    return m / static_cast<double>(v.size());
  };
  const double mu_cyst = mean_of(cyst, "cyst");
  const double mu_bck = mean_of(background, "background");
  if (!(mu_bck > 0.0)) {
    throw std::invalid_argument("background mean must be positive");
  }
  if (mu_cyst == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mu_cyst / mu_bck);
}

namespace {

void renormalise(std::vector<double>& db) {
  if (db.empty()) return;
  const double peak = *std::max_element(db.begin(), db.end());
  for (double& v : db) v -= peak;
}

}  // namespace

LateralProfile LateralProfile::window(double centre, double half_width) const {
  LateralProfile out;
  out.requested_depth = requested_depth;
  out.depth = depth;
  out.row = row;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - centre) <= half_width) {
      out.x.push_back(x[i]);
      out.value_db.push_back(value_db[i]);
    }
  }
  if (out.x.empty()) {
    throw std::out_of_range("profile window contains no samples");
  }
  renormalise(out.value_db);
  return out;
}

LateralProfile lateral_profile(const DbImage& image, double depth) {
  const auto& g = image.image.grid;
  LateralProfile p;
  p.requested_depth = depth;
  p.row = g.nearest_row(depth);
  p.depth = g.z(p.row);
  p.x.resize(g.nx);
  for (std::size_t ix = 0; ix < g.nx; ++ix) p.x[ix] = g.x(ix);
  p.value_db = image.image.row(p.row);
  renormalise(p.value_db);
  return p;
}

LateralProfile lateral_profile(const Image& envelope_image, double depth, double floor_db) {
  const auto& g = envelope_image.grid;
  LateralProfile p;
  p.requested_depth = depth;
  p.row = g.nearest_row(depth);
  p.depth = g.z(p.row);
  p.x.resize(g.nx);
  for (std::size_t ix = 0; ix < g.nx; ++ix) p.x[ix] = g.x(ix);
  p.value_db = to_db(envelope_image.row(p.row), floor_db);
  return p;
}

namespace {

struct HalfMaxSpan {
  std::size_t left;   // first sample below threshold, left of the peak
  std::size_t right;  // first sample below threshold, right of the peak
  double width;
};

// Outward walk from the first maximum to the threshold crossing on each
// side, with linear interpolation between the bracketing samples.
HalfMaxSpan half_max_span(std::span<const double> x, std::span<const double> v,
                          double threshold) {
  if (x.size() != v.size() || v.size() < 3) {
    throw std::invalid_argument("FWHM needs matching x/value arrays of at least 3 samples");
  }
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  if (peak == 0 || peak == v.size() - 1) {
    throw std::domain_error("FWHM: peak lies on the profile boundary");
  }
  auto crossing = [&](std::size_t above, std::size_t below) {
    const double t = (threshold - v[above]) / (v[below] - v[above]);
    return x[above] + t * (x[below] - x[above]);
  };
  std::size_t l = peak;
  while (l > 0 && v[l - 1] >= threshold) --l;
  if (l == 0) throw std::domain_error("FWHM: no half-maximum crossing left of the peak");
  std::size_t r = peak;
  while (r + 1 < v.size() && v[r + 1] >= threshold) ++r;
  if (r + 1 == v.size()) {
    throw std::domain_error("FWHM: no half-maximum crossing right of the peak");
  }
  return {l - 1, r + 1, crossing(r, r + 1) - crossing(l, l - 1)};
}

double half_power_threshold(std::span<const double> db) {
  return *std::max_element(db.begin(), db.end()) + 20.0 * std::log10(0.5);
}

}  // namespace

double fwhm(const LateralProfile& profile) {
  return half_max_span(profile.x, profile.value_db, half_power_threshold(profile.value_db))
      .width;
}

double fwhm_linear(std::span<const double> x, std::span<const double> amplitude) {
  const double peak = *std::max_element(amplitude.begin(), amplitude.end());
  return half_max_span(x, amplitude, 0.5 * peak).width;
}

double sidelobe_level(const LateralProfile& profile) {
  const auto& v = profile.value_db;
  const auto span = half_max_span(profile.x, v, half_power_threshold(v));
  const std::size_t n = v.size();
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += v[k];
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }
  // Continue down the main-lobe flanks from the half-maximum crossings.
  std::size_t l = span.left;
  while (l > 0 && smooth[l - 1] < smooth[l]) --l;
  std::size_t r = span.right;
  while (r + 1 < n && smooth[r + 1] < smooth[r]) ++r;
  double level = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < l; ++i) level = std::max(level, v[i]);
  for (std::size_t i = r + 1; i < n; ++i) level = std::max(level, v[i]);
  return level;
}

}  // namespace usbeam
