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

#include "usbeam/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "parallel.hpp"

namespace usbeam {

void Phantom::validate() const {
  for (const auto& s : scatterers) {
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.x) || !std::isfinite(s.z)) {
      throw std::invalid_argument("phantom scatterer has non-finite fields");
    }
    if (!(s.z > 0.0)) {
      throw std::invalid_argument("phantom scatterer must lie below the array (z > 0)");
    }
    if (!bounds.contains(s.x, s.z)) {
      throw std::invalid_argument("phantom scatterer outside its bounding box");
    }
  }
}

std::vector<double> wire_pair_depths() {
  return {35e-3, 40e-3, 45e-3, 50e-3, 55e-3, 60e-3};
}

std::vector<double> single_wire_depths() { return {32e-3, 63e-3}; }

Phantom make_wire_phantom(const WirePhantomOptions& options) {
  Phantom ph;
  ph.label = PhantomLabel::kWires;
  const double half = 0.5 * options.pair_separation;
  const double reach = std::abs(options.pair_center_x) + half + 5e-3;
  ph.bounds = {-std::max(reach, 15e-3), std::max(reach, 15e-3), 25e-3, 70e-3};
  for (double z : single_wire_depths()) {
    if (z < 35e-3) ph.scatterers.push_back({options.pair_center_x, z, options.amplitude});
  }
  for (double z : wire_pair_depths()) {
    ph.scatterers.push_back({options.pair_center_x - half, z, options.amplitude});
    ph.scatterers.push_back({options.pair_center_x + half, z, options.amplitude});
  }
  for (double z : single_wire_depths()) {
    if (z > 60e-3) ph.scatterers.push_back({options.pair_center_x, z, options.amplitude});
  }
  ph.validate();
  return ph;
}

namespace {

std::size_t speckle_count(const BoundingBox& b, double per_cell, double wavelength) {
  const double area = (b.x_max - b.x_min) * (b.z_max - b.z_min);
  return static_cast<std::size_t>(std::ceil(per_cell * area / (wavelength * wavelength)));
}

}  // namespace

std::vector<CircleRegion> cyst_regions(const CystPhantomOptions& options) {
  std::vector<CircleRegion> regions;
  for (double z : options.depths) {
    regions.push_back({options.large_x, z, options.large_radius});
    regions.push_back({options.small_x, z, options.small_radius});
  }
  return regions;
}

Phantom make_cyst_phantom(const CystPhantomOptions& options) {
  Phantom ph;
  ph.label = PhantomLabel::kCysts;
  ph.bounds = options.bounds;
  const auto regions = cyst_regions(options);
  const std::size_t n =
      speckle_count(options.bounds, options.scatterers_per_cell, options.wavelength);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> ux(options.bounds.x_min, options.bounds.x_max);
  std::uniform_real_distribution<double> uz(options.bounds.z_min, options.bounds.z_max);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  ph.scatterers.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ux(rng);
    const double z = uz(rng);
    double a = ua(rng);
    for (const auto& c : regions) {
      if (c.contains(x, z)) {
        a = 0.0;
        break;
      }
    }
    ph.scatterers.push_back({x, z, a});
  }
  ph.validate();
  return ph;
}

Phantom make_tumor_phantom(const TumorPhantomOptions& o) {
  Phantom ph;
  ph.label = PhantomLabel::kTumorWire;
  ph.bounds = o.bounds;
  const std::size_t n = speckle_count(o.bounds, o.scatterers_per_cell, o.wavelength);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> ux(o.bounds.x_min, o.bounds.x_max);
  std::uniform_real_distribution<double> uz(o.bounds.z_min, o.bounds.z_max);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  ph.scatterers.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ux(rng);
    const double z = uz(rng);
    double a = ua(rng);
    const double ex = (x - o.tumor_x) / o.tumor_half_width;
    const double ez = (z - o.tumor_z) / o.tumor_half_depth;
    if (ex * ex + ez * ez <= 1.0) a *= o.tumor_gain;
    ph.scatterers.push_back({x, z, a});
  }
  ph.scatterers.push_back({o.wire_x, o.wire_z, o.wire_amplitude});
  ph.validate();
  return ph;
}

void PulseModel::validate() const {
  if (!(f0 > 0.0)) throw std::invalid_argument("pulse centre frequency must be positive");
  if (cycles < 1) throw std::invalid_argument("pulse needs at least one cycle");
}

std::vector<double> PulseModel::waveform(double fs) const {
  validate();
  const double duration = static_cast<double>(cycles) / f0;
  const auto n = static_cast<std::size_t>(std::floor(duration * fs)) + 1;
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    double gain = 1.0;
    if (weighting == PulseWeighting::kHann) {
      gain = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / duration);
    }
    w[k] = gain * std::sin(2.0 * std::numbers::pi * f0 * t);
  }
  return w;
}

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

RoundTripPulse::RoundTripPulse(const PulseModel& impulse_response, double fs, int oversample) {
  if (!(fs > 0.0) || oversample < 1) {
    throw std::invalid_argument("round-trip pulse needs fs > 0 and oversample >= 1");
  }
  table_rate_ = fs * oversample;
  PulseModel excitation = impulse_response;
  excitation.weighting = PulseWeighting::kRectangular;
  const auto ir = impulse_response.waveform(table_rate_);
  table_ = convolve(convolve(excitation.waveform(table_rate_), ir), ir);
  double peak = 0.0;
  for (double v : table_) peak = std::max(peak, std::abs(v));
  for (double& v : table_) v /= peak;
  duration_ = static_cast<double>(table_.size() - 1) / table_rate_;
}

double RoundTripPulse::operator()(double t) const {
  if (t < 0.0 || t > duration_) return 0.0;
  const double pos = t * table_rate_;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= table_.size()) return table_.back();
  const double frac = pos - static_cast<double>(k);
  return table_[k] + frac * (table_[k + 1] - table_[k]);
}

RfFrame synthesize_rf(const Phantom& phantom, const ArrayGeometry& geometry,
                      const PulseModel& pulse, double fs, const SynthesisOptions& options) {
  if (phantom.scatterers.empty()) {
    throw std::invalid_argument("cannot synthesise RF data from an empty phantom");
  }
  phantom.validate();
  if (!(fs > 2.0 * pulse.f0)) {
    throw std::invalid_argument("sampling frequency must exceed twice the centre frequency");
  }
  const RoundTripPulse p(pulse, fs);
  const double c = geometry.sound_speed();
  const std::size_t m = geometry.element_count();

  double latest = 0.0;
  for (const auto& s : phantom.scatterers) {
    const double reach = std::max(std::abs(s.x - geometry.element_x(0)),
                                  std::abs(s.x - geometry.element_x(m - 1)));
    latest = std::max(latest, (s.z + std::hypot(reach, s.z)) / c);
  }
  const auto k_count =
      static_cast<std::size_t>(std::ceil((latest + p.duration()) * fs)) + 1;

  std::vector<double> samples(m * k_count, 0.0);
  detail::parallel_for(m, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* ch = samples.data() + i * k_count;
      const double xi = geometry.element_x(i);
      for (const auto& s : phantom.scatterers) {
        if (s.amplitude == 0.0) continue;
        const double r = std::hypot(s.x - xi, s.z);
        const double onset = (s.z + r) / c;
        const double gain = s.amplitude / r;
        const auto k_first = static_cast<std::size_t>(std::ceil(onset * fs));
        const auto k_last = std::min(
            k_count - 1, static_cast<std::size_t>(std::floor((onset + p.duration()) * fs)));
        for (std::size_t k = k_first; k <= k_last; ++k) {
          ch[k] += gain * p(static_cast<double>(k) / fs - onset);
        }
      }
    }
  });
  return RfFrame(m, k_count, std::move(samples),
                 Acquisition{fs, pulse.f0, c, geometry.pitch()});
}

double signal_power(const RfFrame& frame) {
  double peak = 0.0;
  for (double v : frame.samples()) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) {
    throw std::invalid_argument("frame has no signal; SNR is undefined");
  }
  const double threshold = 0.01 * peak;
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : frame.samples()) {
    if (std::abs(v) > threshold) {
      sum += v * v;
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

RfFrame add_noise(const RfFrame& frame, const NoiseSpec& spec) {
  const double power = signal_power(frame);
  if (spec.target_snr_db >= 300.0) return frame;
  const double sigma = std::sqrt(power / std::pow(10.0, spec.target_snr_db / 10.0));
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> noisy(frame.samples().begin(), frame.samples().end());
  for (double& v : noisy) v += gauss(rng);
  return RfFrame(frame.element_count(), frame.sample_count(), std::move(noisy),
                 frame.acquisition());
}

double realized_snr_db(const RfFrame& clean, const RfFrame& noisy) {
  if (clean.samples().size() != noisy.samples().size()) {
    throw std::invalid_argument("frames differ in shape");
  }
  double noise = 0.0;
  const auto a = clean.samples();
  const auto b = noisy.samples();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = b[k] - a[k];
    noise += d * d;
  }
  noise /= static_cast<double>(a.size());
  if (!(noise > 0.0)) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal_power(clean) / noise);
}

}  // namespace usbeam
