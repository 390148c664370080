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

struct Acquisition {
  double fs = 100e6;           // sampling frequency [Hz]
  double f0 = 3e6;             // transducer centre frequency [Hz]
  double sound_speed = 1540.0; // [m/s]
  double pitch = 0.3e-3;       // element pitch [m], carried for file round-trips

  bool operator==(const Acquisition&) const = default;
};

/// Raw channel data x_i(k): M channels of K samples, stored channel-major.
/// Immutable once constructed.
class RfFrame {
 public:
  /// Throws std::invalid_argument if the shape is empty, samples.size() != M*K,
  /// any sample is non-finite, or fs <= 2 f0.
  RfFrame(std::size_t element_count, std::size_t sample_count, std::vector<double> samples,
          Acquisition acquisition);

  /// Zero-filled frame.
  static RfFrame zeros(std::size_t element_count, std::size_t sample_count,
                       Acquisition acquisition);

  std::size_t element_count() const { return element_count_; }
  std::size_t sample_count() const { return sample_count_; }
  const Acquisition& acquisition() const { return acquisition_; }

  std::span<const double> channel(std::size_t i) const {
    return {samples_.data() + i * sample_count_, sample_count_};
  }
  std::span<const double> samples() const { return samples_; }

  bool operator==(const RfFrame&) const = default;

 private:
  std::size_t element_count_;
  std::size_t sample_count_;
  std::vector<double> samples_;
  Acquisition acquisition_;
};

/// sign(x) * sqrt(|x|).
inline double signed_sqrt(double x) {
  return x < 0.0 ? -std::sqrt(-x) : std::sqrt(x);
}

/// Samples x_i(d_i) for every element i, linearly interpolated at the
/// fractional index d_i. Indices outside [0, K-1] read as zero.
/// `out` must hold element_count() values.
void fetch_delayed(const RfFrame& frame, std::span<const double> delays, std::span<double> out);

std::vector<double> fetch_delayed(const RfFrame& frame, std::span<const double> delays);

}  // namespace usbeam
