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

#include "usbeam/beamformers.hpp"
#include "usbeam/image.hpp"

namespace usbeam {

/// Linear-phase FIR band-pass, Hamming-windowed and normalised to unit
/// gain at `center`.
struct FilterSpec {
  double center = 6e6;          // [Hz]
  double half_bandwidth = 1.5e6; // [Hz]
  std::size_t taps = 63;         // odd

  /// Default band for a beamformer: f0 +- f0/2 for DAS, 2 f0 +- f0/2 for the
  /// multiply-based family (their output lives around the second harmonic).
  static FilterSpec for_beamformer(BeamformerKind kind, double f0);

  /// Throws std::invalid_argument unless taps is odd and >= 3 and
  /// 0 < center - half_bandwidth < center + half_bandwidth < fs / 2.
  void validate(double fs) const;
};

std::vector<double> design_bandpass(const FilterSpec& spec, double fs);

/// Complex gain magnitude of an FIR at frequency f.
double fir_gain(std::span<const double> taps, double f, double fs);

/// Zero-phase application of the designed filter: output has the input's
/// length and alignment. Samples beyond the ends are taken equal to the
/// nearest end sample. Requires signal.size() > taps.
std::vector<double> bandpass(std::span<const double> signal, const FilterSpec& spec, double fs);

/// Same as above with precomputed taps (odd length).
std::vector<double> apply_fir(std::span<const double> signal, std::span<const double> taps);

/// Magnitude of the analytic signal, built in the frequency domain over a
/// zero-padded power-of-two length. Requires at least 4 samples.
std::vector<double> envelope(std::span<const double> signal);

/// Line-wise (axial) versions over a whole image. `axial_fs` is the line
/// sampling rate, see ImageGrid::axial_sample_rate.
Image bandpass_lines(const Image& image, const FilterSpec& spec, double axial_fs,
                     unsigned threads = 0);
Image envelope_lines(const Image& image, unsigned threads = 0);

/// Image in dB relative to its own maximum, floored at -dynamic_range_db.
struct DbImage {
  Image image;
  double dynamic_range_db = 70.0;
};

/// v_db = 20 log10(v / max v), floored at -dynamic_range_db.
/// Throws std::invalid_argument if no pixel is strictly positive or the
/// dynamic range is not positive.
DbImage log_compress(const Image& envelope_image, double dynamic_range_db);

/// Single-sequence variant used for lateral profiles.
std::vector<double> to_db(std::span<const double> values, double dynamic_range_db);

}  // namespace usbeam
