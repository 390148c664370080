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

#include "usbeam/beamformers.hpp"

#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace usbeam {

std::string_view to_string(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::kDas:
      return "das";
    case BeamformerKind::kDmasNaive:
      return "dmas-naive";
    case BeamformerKind::kDmasFast:
      return "dmas";
    case BeamformerKind::kDsDmas:
      return "dsdmas";
  }
  return "unknown";
}

std::optional<BeamformerKind> parse_beamformer(std::string_view name) {
  if (name == "das") return BeamformerKind::kDas;
  if (name == "dmas") return BeamformerKind::kDmasFast;
  if (name == "dmas-naive") return BeamformerKind::kDmasNaive;
  if (name == "dsdmas") return BeamformerKind::kDsDmas;
  return std::nullopt;
}

std::size_t min_elements(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::kDas:
      return 1;
    case BeamformerKind::kDmasNaive:
    case BeamformerKind::kDmasFast:
      return 2;
    case BeamformerKind::kDsDmas:
      return 3;
  }
  return 1;
}

namespace {

void require_elements(BeamformerKind kind, std::size_t m) {
  if (m < min_elements(kind)) {
    throw std::invalid_argument(std::string(to_string(kind)) + " requires at least " +
                                std::to_string(min_elements(kind)) + " elements (got " +
                                std::to_string(m) + ")");
  }
}

}  // namespace

OpCount op_count_per_pixel(BeamformerKind kind, std::size_t element_count) {
  require_elements(kind, element_count);
  const std::uint64_t m = element_count;
  const std::uint64_t pairs = m * (m - 1) / 2;
  switch (kind) {
    case BeamformerKind::kDas:
      return {0, 0, m};
    case BeamformerKind::kDmasFast:
      return {pairs, m, pairs + 2 * (m - 1)};
    case BeamformerKind::kDmasNaive:
      // Same model total; the nonlinearity runs once per pair instead of per element.
      return {pairs, pairs, pairs + 2 * (m - 1)};
    case BeamformerKind::kDsDmas: {
      const std::uint64_t stage_two_pairs = (m - 1) * (m - 2) / 2;
      return {pairs + stage_two_pairs, m + (m - 1), m * (m - 1) + 3 * (m - 1)};
    }
  }
  return {};
}

double das_pixel(std::span<const double> xd) {
  double acc = 0.0;
  for (double v : xd) acc += v;
  return acc;
}

double dmas_pixel_naive(std::span<const double> xd) {
  require_elements(BeamformerKind::kDmasNaive, xd.size());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < xd.size(); ++i) {
    for (std::size_t j = i + 1; j < xd.size(); ++j) {
      acc += signed_sqrt(xd[i] * xd[j]);
    }
  }
  return acc;
}

// The pair sum over i<j is evaluated as sum_i x'_i * (sum_{j>i} x'_j),
// walking from the last element so the suffix sum is a running total.

double dmas_pixel_fast(std::span<const double> xd) {
  require_elements(BeamformerKind::kDmasFast, xd.size());
  double acc = 0.0;
  double suffix = 0.0;
  for (std::size_t k = xd.size(); k-- > 0;) {
    const double v = signed_sqrt(xd[k]);
    acc += v * suffix;
    suffix += v;
  }
  return acc;
}

std::vector<double> stage_one_terms(std::span<const double> xd) {
  require_elements(BeamformerKind::kDsDmas, xd.size());
  const std::size_t m = xd.size();
  std::vector<double> t(m - 1);
  double suffix = signed_sqrt(xd[m - 1]);
  for (std::size_t k = m - 1; k-- > 0;) {
    const double v = signed_sqrt(xd[k]);
    t[k] = v * suffix;
    suffix += v;
  }
  return t;
}

double dsdmas_pixel(std::span<const double> xd) {
  require_elements(BeamformerKind::kDsDmas, xd.size());
  const std::size_t m = xd.size();
  // Stage one (term t_k) and stage two (pairing of signed_sqrt(t_k)) share
  // one reverse sweep.
  double suffix = signed_sqrt(xd[m - 1]);
  double acc = 0.0;
  double term_suffix = 0.0;
  for (std::size_t k = m - 1; k-- > 0;) {
    const double v = signed_sqrt(xd[k]);
    const double term = signed_sqrt(v * suffix);
    suffix += v;
    acc += term * term_suffix;
    term_suffix += term;
  }
  return acc;
}

double beamform_pixel(BeamformerKind kind, std::span<const double> xd) {
  switch (kind) {
    case BeamformerKind::kDas:
      return das_pixel(xd);
    case BeamformerKind::kDmasNaive:
      return dmas_pixel_naive(xd);
    case BeamformerKind::kDmasFast:
      return dmas_pixel_fast(xd);
    case BeamformerKind::kDsDmas:
      return dsdmas_pixel(xd);
  }
  throw std::invalid_argument("unknown beamformer kind");
}

BeamformedImage beamform_image(const RfFrame& frame, const DelayTable& delays,
                               BeamformerKind kind, const BeamformOptions& options) {
  const std::size_t m = frame.element_count();
  if (delays.element_count() != m) {
    throw std::invalid_argument("delay table element count (" +
                                std::to_string(delays.element_count()) +
                                ") does not match the RF frame (" + std::to_string(m) + ")");
  }
  require_elements(kind, m);

  BeamformedImage out;
  out.kind = kind;
  out.image = Image(delays.grid());
  out.per_pixel = op_count_per_pixel(kind, m);
  out.total = out.per_pixel.scaled(delays.pixel_count());

  const ImageGrid& grid = delays.grid();
  detail::parallel_for(grid.nx, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d(m);
    std::vector<double> xd(m);
    for (std::size_t ix = begin; ix < end; ++ix) {
      for (std::size_t iz = 0; iz < grid.nz; ++iz) {
        const std::size_t p = grid.pixel(ix, iz);
        delays.fill(p, d);
        fetch_delayed(frame, d, xd);
        out.image.values[p] = beamform_pixel(kind, xd);
      }
    }
  });
  return out;
}

}  // namespace usbeam
