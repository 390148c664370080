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

#include "usbeam/beamformers.hpp"
#include "usbeam/dsp.hpp"
#include "usbeam/geometry.hpp"
#include "usbeam/image.hpp"
#include "usbeam/rf.hpp"

namespace usbeam {

struct Reconstruction {
  Image envelope;  // post-filter envelope, linear scale
  BeamformerKind kind = BeamformerKind::kDas;
  OpCount per_pixel;
  OpCount total;
};

struct ReconstructOptions {
  /// Acquisition time origin [s], see DelayTable.
  double time_origin = 0.0;
  unsigned threads = 0;
};

/// Beamforms `frame` on `grid`, band-passes every line at the axial rate
/// and takes the envelope. The array geometry is rebuilt from the frame's
/// acquisition record.
Reconstruction reconstruct(const RfFrame& frame, const ImageGrid& grid, BeamformerKind kind,
                           const FilterSpec& filter, const ReconstructOptions& options = {});

}  // namespace usbeam
