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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "usbeam/geometry.hpp"
#include "usbeam/image.hpp"
#include "usbeam/rf.hpp"

namespace usbeam {

enum class BeamformerKind { kDas, kDmasNaive, kDmasFast, kDsDmas };

/// CLI spelling: "das", "dmas-naive", "dmas", "dsdmas".
std::string_view to_string(BeamformerKind kind);
std::optional<BeamformerKind> parse_beamformer(std::string_view name);

/// Minimum element count accepted by each kernel.
std::size_t min_elements(BeamformerKind kind);

/// Operation budget per pixel following the published complexity model:
///   DAS      M
///   DMAS     M(M-1)/2 + 2(M-1)
///   DS-DMAS  M(M-1) + 3(M-1)
/// `multiplies` counts pairwise products and `special_ops` counts
/// sign/abs/sqrt triples (one per triple). `total` is the model figure and
/// is not the sum of the other two; the model's overhead terms are kept
/// as published.
struct OpCount {
  std::uint64_t multiplies = 0;
  std::uint64_t special_ops = 0;
  std::uint64_t total = 0;

  OpCount& operator+=(const OpCount& o) {
    multiplies += o.multiplies;
    special_ops += o.special_ops;
    total += o.total;
    return *this;
  }
  OpCount scaled(std::uint64_t n) const { return {multiplies * n, special_ops * n, total * n}; }
  bool operator==(const OpCount&) const = default;
};

/// Throws std::invalid_argument if M is below min_elements(kind).
OpCount op_count_per_pixel(BeamformerKind kind, std::size_t element_count);

// Per-pixel kernels over the delayed samples x_id of one pixel.

double das_pixel(std::span<const double> xd);

/// Sum over i<j of sign(x_i x_j) sqrt(|x_i x_j|); the coupling is formed
/// first and the nonlinearity applied to each of the M(M-1)/2 products.
double dmas_pixel_naive(std::span<const double> xd);

/// Same value as dmas_pixel_naive with the signed square root taken once
/// per element: sum over i<j of x'_i x'_j, x' = signed_sqrt(x).
double dmas_pixel_fast(std::span<const double> xd);

/// t_i = x'_i * sum_{j>i} x'_j for i = 0..M-2. The terms sum to the DMAS
/// output. Requires M >= 3.
std::vector<double> stage_one_terms(std::span<const double> xd);

/// Second correlation stage over the stage-one terms:
/// sum over i<j of t'_i t'_j with t' = signed_sqrt(t). Requires M >= 3.
double dsdmas_pixel(std::span<const double> xd);

double beamform_pixel(BeamformerKind kind, std::span<const double> xd);

/// Raw (pre-filter) beamformer output for every pixel of the delay table's grid.
struct BeamformedImage {
  Image image;
  BeamformerKind kind = BeamformerKind::kDas;
  OpCount per_pixel;
  OpCount total;
};

struct BeamformOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Throws std::invalid_argument if the delay table was built for a different
/// element count or the kind's minimum element count is not met.
BeamformedImage beamform_image(const RfFrame& frame, const DelayTable& delays,
                               BeamformerKind kind, const BeamformOptions& options = {});

}  // namespace usbeam
