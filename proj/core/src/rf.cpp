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

#include "usbeam/rf.hpp"

#include <stdexcept>

namespace usbeam {

RfFrame::RfFrame(std::size_t element_count, std::size_t sample_count,
                 std::vector<double> samples, Acquisition acquisition)
    : element_count_(element_count),
      sample_count_(sample_count),
      samples_(std::move(samples)),
      acquisition_(acquisition) {
  if (element_count_ == 0 || sample_count_ == 0) {
    throw std::invalid_argument("RF frame needs M > 0 channels and K > 0 samples");
  }
  if (samples_.size() != element_count_ * sample_count_) {
    throw std::invalid_argument("RF sample buffer does not match M x K");
  }
  if (!(acquisition_.fs > 2.0 * acquisition_.f0) || !(acquisition_.f0 > 0.0)) {
    throw std::invalid_argument("RF frame requires fs > 2 f0 > 0");
  }
  if (!(acquisition_.sound_speed > 0.0)) {
    throw std::invalid_argument("sound speed must be positive");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("RF frame contains non-finite samples");
    }
  }
}

RfFrame RfFrame::zeros(std::size_t element_count, std::size_t sample_count,
                       Acquisition acquisition) {
  return RfFrame(element_count, sample_count,
                 std::vector<double>(element_count * sample_count, 0.0), acquisition);
}

void fetch_delayed(const RfFrame& frame, std::span<const double> delays, std::span<double> out) {
  const std::size_t m = frame.element_count();
  if (delays.size() != m || out.size() != m) {
    throw std::invalid_argument("delay/output size must equal the element count");
  }
  const auto k_count = static_cast<double>(frame.sample_count());
  const std::size_t last = frame.sample_count() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = delays[i];
    if (!(d > -1.0) || !(d < k_count)) {
      out[i] = 0.0;
      continue;
    }
    const double base = std::floor(d);
    const double frac = d - base;
    const auto ch = frame.channel(i);
    // Zero extension on both sides keeps interpolation linear in the data.
    const long long k0 = static_cast<long long>(base);
    const double a = (k0 >= 0) ? ch[static_cast<std::size_t>(k0)] : 0.0;
    double b = 0.0;
    if (frac != 0.0 && k0 + 1 >= 0 && static_cast<std::size_t>(k0 + 1) <= last) {
      b = ch[static_cast<std::size_t>(k0 + 1)];
    }
    out[i] = a + frac * (b - a);
  }
}

std::vector<double> fetch_delayed(const RfFrame& frame, std::span<const double> delays) {
  std::vector<double> out(frame.element_count());
  fetch_delayed(frame, delays, out);
  return out;
}

}  // namespace usbeam
