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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "usbeam/beamformers.hpp"
#include "usbeam/geometry.hpp"
#include "usbeam/simulator.hpp"

namespace {

std::vector<double> channel_values(std::size_t m) {
  std::mt19937_64 rng(m);
  std::normal_distribution<double> dist;
  std::vector<double> v(m);
  for (auto& x : v) x = dist(rng);
  return v;
}

template <double (*Kernel)(std::span<const double>)>
void BM_Pixel(benchmark::State& state) {
  const auto xd = channel_values(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(xd));
  }
  state.SetItemsProcessed(state.iterations());
}

BENCHMARK(BM_Pixel<usbeam::das_pixel>)->RangeMultiplier(2)->Range(16, 128);
BENCHMARK(BM_Pixel<usbeam::dmas_pixel_naive>)->RangeMultiplier(2)->Range(16, 128);
BENCHMARK(BM_Pixel<usbeam::dmas_pixel_fast>)->RangeMultiplier(2)->Range(16, 128);
BENCHMARK(BM_Pixel<usbeam::dsdmas_pixel>)->RangeMultiplier(2)->Range(16, 128);

void BM_Image(benchmark::State& state) {
  const auto kind = static_cast<usbeam::BeamformerKind>(state.range(0));
  const auto arr = usbeam::ArrayGeometry::linear(64, 0.3e-3, 1540.0);
  const auto frame =
      usbeam::synthesize_rf(usbeam::make_wire_phantom(), arr, usbeam::PulseModel{}, 100e6);
  const usbeam::ImageGrid grid{-10e-3, 10e-3, 30e-3, 66e-3, 101, 585};
  const usbeam::DelayTable delays(arr, grid, 100e6);
  for (auto _ : state) {
    auto out = usbeam::beamform_image(frame, delays, kind, {1});
    benchmark::DoNotOptimize(out.image.values.data());
  }
  state.SetLabel(std::string(usbeam::to_string(kind)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.pixel_count()));
}

BENCHMARK(BM_Image)
    ->Arg(static_cast<int>(usbeam::BeamformerKind::kDas))
    ->Arg(static_cast<int>(usbeam::BeamformerKind::kDmasFast))
    ->Arg(static_cast<int>(usbeam::BeamformerKind::kDsDmas))
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
