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

#include "usbeam/pipeline.hpp"

#include <stdexcept>
#include <string>

namespace usbeam {

Reconstruction reconstruct(const RfFrame& frame, const ImageGrid& grid, BeamformerKind kind,
                           const FilterSpec& filter, const ReconstructOptions& options) {
  const auto& acq = frame.acquisition();
  if (frame.element_count() < min_elements(kind)) {
    throw std::invalid_argument(std::string(to_string(kind)) + " requires at least " +
                                std::to_string(min_elements(kind)) + " elements, frame has " +
                                std::to_string(frame.element_count()));
  }
  const auto geometry = ArrayGeometry::linear(frame.element_count(), acq.pitch, acq.sound_speed);
  const auto delays = compute_delays(geometry, grid, acq.fs, options.time_origin);
  const unsigned threads = options.threads;
  auto raw = beamform_image(frame, delays, kind, BeamformOptions{threads});
  const double axial_fs = grid.axial_sample_rate(acq.sound_speed);
  Image filtered = bandpass_lines(raw.image, filter, axial_fs, threads);
  return {envelope_lines(filtered, threads), kind, raw.per_pixel, raw.total};
}

}  // namespace usbeam
