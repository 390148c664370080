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

#include "usbeam/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"

namespace usbeam {

FilterSpec FilterSpec::for_beamformer(BeamformerKind kind, double f0) {
  FilterSpec spec;
  spec.center = (kind == BeamformerKind::kDas) ? f0 : 2.0 * f0;
  spec.half_bandwidth = 0.5 * f0;
  spec.taps = 63;
  return spec;
}

void FilterSpec::validate(double fs) const {
  if (taps < 3 || taps % 2 == 0) {
    throw std::invalid_argument("filter tap count must be odd and >= 3");
  }
  if (!(fs > 0.0)) {
    throw std::invalid_argument("filter sampling rate must be positive");
  }
  if (!(half_bandwidth > 0.0) || !(center - half_bandwidth > 0.0)) {
    throw std::invalid_argument("filter passband must stay above DC");
  }
  if (!(center + half_bandwidth < 0.5 * fs)) {
    throw std::invalid_argument("filter passband exceeds Nyquist (fs/2 = " +
                                std::to_string(0.5 * fs) + " Hz)");
  }
}

double fir_gain(std::span<const double> taps, double f, double fs) {
  std::complex<double> acc{0.0, 0.0};
  const double w = 2.0 * std::numbers::pi * f / fs;
  for (std::size_t n = 0; n < taps.size(); ++n) {
    acc += taps[n] * std::polar(1.0, -w * static_cast<double>(n));
  }
  return std::abs(acc);
}

std::vector<double> design_bandpass(const FilterSpec& spec, double fs) {
  spec.validate(fs);
  const std::size_t n = spec.taps;
  const double mid = 0.5 * static_cast<double>(n - 1);
  const double cutoff = spec.half_bandwidth / fs;  // low-pass prototype, cycles/sample
  const double centre = spec.center / fs;
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) - mid;
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(n - 1));
    const double x = 2.0 * std::numbers::pi * cutoff * t;
    const double lowpass = 2.0 * cutoff * (t == 0.0 ? 1.0 : std::sin(x) / x);
    h[k] = window * lowpass * 2.0 * std::cos(2.0 * std::numbers::pi * centre * t);
  }
  const double g = fir_gain(h, spec.center, fs);
  for (double& v : h) v /= g;
  // The construction is symmetric up to cos/sin rounding; make it exact.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double avg = 0.5 * (h[k] + h[n - 1 - k]);
    h[k] = avg;
    h[n - 1 - k] = avg;
  }
  return h;
}

std::vector<double> apply_fir(std::span<const double> signal, std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw std::invalid_argument("FIR tap count must be odd");
  }
  if (signal.size() <= taps.size()) {
    throw std::invalid_argument("signal must be longer than the filter");
  }
  const auto len = static_cast<long long>(signal.size());
  const auto half = static_cast<long long>(taps.size() / 2);
  const double first = signal.front();
  const double last = signal.back();
  auto sample = [&](long long k) {
    if (k < 0) return first;
    if (k >= len) return last;
    return signal[static_cast<std::size_t>(k)];
  };
  std::vector<double> out(signal.size());
  for (long long n = 0; n < len; ++n) {
    double acc = 0.0;
    for (long long k = 0; k < static_cast<long long>(taps.size()); ++k) {
      acc += taps[static_cast<std::size_t>(k)] * sample(n + half - k);
    }
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

std::vector<double> bandpass(std::span<const double> signal, const FilterSpec& spec, double fs) {
  const auto taps = design_bandpass(spec, fs);
  return apply_fir(signal, taps);
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<double> envelope(std::span<const double> signal) {
  if (signal.size() < 4) {
    throw std::invalid_argument("envelope needs at least 4 samples");
  }
  const std::size_t n = next_pow2(signal.size());
  FftwBuffer buf(n);
  Plan forward;
  Plan inverse;
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int len = static_cast<int>(n);
    forward.reset(fftw_plan_dft_1d(len, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE));
    inverse.reset(fftw_plan_dft_1d(len, buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n; ++k) {
    buf.data[k][0] = k < signal.size() ? signal[k] : 0.0;
    buf.data[k][1] = 0.0;
  }
  fftw_execute(forward.get());
  // Analytic signal: keep DC and Nyquist, double positive, drop negative bins.
  for (std::size_t k = 1; k < n / 2; ++k) {
    buf.data[k][0] *= 2.0;
    buf.data[k][1] *= 2.0;
  }
  for (std::size_t k = n / 2 + 1; k < n; ++k) {
    buf.data[k][0] = 0.0;
    buf.data[k][1] = 0.0;
  }
  fftw_execute(inverse.get());
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> out(signal.size());
  for (std::size_t k = 0; k < signal.size(); ++k) {
    out[k] = std::hypot(buf.data[k][0], buf.data[k][1]) * scale;
  }
  return out;
}

Image bandpass_lines(const Image& image, const FilterSpec& spec, double axial_fs,
                     unsigned threads) {
  const auto taps = design_bandpass(spec, axial_fs);
  Image out(image.grid);
  detail::parallel_for(image.grid.nx, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ix = begin; ix < end; ++ix) {
      const auto filtered = apply_fir(image.line(ix), taps);
      std::copy(filtered.begin(), filtered.end(), out.line(ix).begin());
    }
  });
  return out;
}

Image envelope_lines(const Image& image, unsigned threads) {
  Image out(image.grid);
  detail::parallel_for(image.grid.nx, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ix = begin; ix < end; ++ix) {
      const auto env = envelope(image.line(ix));
      std::copy(env.begin(), env.end(), out.line(ix).begin());
    }
  });
  return out;
}

std::vector<double> to_db(std::span<const double> values, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) {
    throw std::invalid_argument("dynamic range must be positive");
  }
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, v);
  if (!(peak > 0.0)) {
    throw std::invalid_argument("cannot normalise: no strictly positive value");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double db = v > 0.0 ? 20.0 * std::log10(v / peak) : -dynamic_range_db;
    out[i] = std::max(db, -dynamic_range_db);
  }
  return out;
}

DbImage log_compress(const Image& envelope_image, double dynamic_range_db) {
  DbImage out;
  out.dynamic_range_db = dynamic_range_db;
  out.image = Image(envelope_image.grid, to_db(envelope_image.values, dynamic_range_db));
  return out;
}

}  // namespace usbeam
