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
#include <string>
#include <string_view>
#include <vector>

#include "usbeam/dsp.hpp"
#include "usbeam/image.hpp"
#include "usbeam/rf.hpp"

namespace usbeam {

// On-disk containers. Both share one 64-byte little-endian header layout
// followed by float32 samples, line-major (channel-major for RF):
//
//   offset  size  RF ("URF1")            image ("UIM1")
//   0       4     magic                  magic
//   4       2     version (u16)          version (u16)
//   6       2     element_count (u16)    nx (u16)
//   8       4     sample_count (u32)     nz (u32)
//   12      8     fs [Hz] (f64)          x_min [m] (f64)
//   20      8     f0 [Hz] (f64)          x_max [m] (f64)
//   28      8     c [m/s] (f64)          z_min [m] (f64)
//   36      8     pitch [m] (f64)        z_max [m] (f64)
//   44      20    reserved (zero)        reserved (zero)
//   64      4*M*K samples (f32)          4*nx*nz samples (f32)

inline constexpr std::size_t kHeaderBytes = 64;
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::string_view kRfMagic = "URF1";
inline constexpr std::string_view kImageMagic = "UIM1";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_rf(const RfFrame& frame);
RfFrame decode_rf(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_image(const Image& image);
Image decode_image(const std::vector<std::uint8_t>& bytes);

/// Writes through a temporary sibling file renamed into place.
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_rf(const std::filesystem::path& path, const RfFrame& frame);
RfFrame read_rf(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& image);
Image read_image(const std::filesystem::path& path);

/// 8-bit grey level: round(255 * (v_db + DR) / DR), clamped to [0, 255].
std::uint8_t gray_level(double value_db, double dynamic_range_db);

/// Binary PGM (P5): nx columns (lateral) by nz rows (depth), top row shallowest.
std::vector<std::uint8_t> encode_pgm(const DbImage& image);

}  // namespace usbeam
