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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Measurement protocols (regions, depths, windows, seeds)
// are fixed here and are not tuned to the outcome.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "commands.hpp"
#include "testkit.hpp"
#include "usbeam/beamformers.hpp"
#include "usbeam/container.hpp"
#include "usbeam/dsp.hpp"
#include "usbeam/metrics.hpp"
#include "usbeam/pipeline.hpp"
#include "usbeam/simulator.hpp"

using namespace usbeam;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail() { pass = false; }
  void note(const char* format, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    detail += "\n      ";
    detail += buf;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kMm = 1e-3;
constexpr double kF0 = 3e6;
constexpr double kFs = 100e6;
constexpr double kC = 1540.0;
constexpr std::size_t kElements = 64;
constexpr BeamformerKind kKinds[] = {BeamformerKind::kDas, BeamformerKind::kDmasFast,
                                     BeamformerKind::kDsDmas};

double group_delay() { return RoundTripPulse(PulseModel{kF0, 2, PulseWeighting::kHann}, kFs).group_delay(); }

ArrayGeometry array() { return ArrayGeometry::linear(kElements, 0.3e-3, kC); }

// Wire scan grid: 0.1 mm laterally, 25 MHz axial line sampling.
const ImageGrid kWireGrid{-10 * kMm, 10 * kMm, 30 * kMm, 66 * kMm, 201, 1170};
// Cyst scan grid, same sampling.
const ImageGrid kCystGrid{-10 * kMm, 10 * kMm, 5 * kMm, 55 * kMm, 201, 1625};

Image reconstruct_with(const RfFrame& rf, const ImageGrid& grid, BeamformerKind kind,
                       unsigned threads) {
  return reconstruct(rf, grid, kind, FilterSpec::for_beamformer(kind, kF0),
                     ReconstructOptions{group_delay(), threads})
      .envelope;
}

/// Depth of the brightest pixel with |x - xc| <= half_width and
/// |z - depth| <= 1 mm.
double peak_row_depth(const Image& env, double xc, double half_width, double depth) {
  const auto& g = env.grid;
  double best = -1.0;
  double at = depth;
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    if (std::abs(g.x(ix) - xc) > half_width + 1e-12) continue;
    for (std::size_t iz = 0; iz < g.nz; ++iz) {
      if (std::abs(g.z(iz) - depth) > 1 * kMm) continue;
      if (env.at(ix, iz) > best) {
        best = env.at(ix, iz);
        at = g.z(iz);
      }
    }
  }
  return at;
}

// --- 1-4: algebraic identities ---------------------------------------------

Outcome dmas_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (std::size_t m = 2; m <= 32; ++m) {
    testkit::for_all(1000 + m, 100, [&](testkit::Gen& g, std::size_t) {
      const auto xd = g.samples(m);
      const double naive = dmas_pixel_naive(xd);
      const double fast = dmas_pixel_fast(xd);
      const double pairs = testkit::dmas_pairs(xd);
      worst = std::max(worst, std::abs(fast - naive) / (1.0 + std::abs(naive)));
      worst_oracle = std::max(worst_oracle, std::abs(naive - pairs) / (1.0 + std::abs(pairs)));
    });
  }
  const double dt = seconds_since(t0);
  if (!(worst <= 1e-9) || !(worst_oracle <= 1e-9) || !(dt < 1.0)) o.fail();
  o.note("max |fast-naive|/(1+|naive|) = %.3g over M=2..32 x 100 (limit 1e-9)", worst);
  o.note("naive vs pairwise test oracle: %.3g", worst_oracle);
  o.note("runtime %.3f s (limit 1 s)", dt);
  return o;
}

Outcome dsdmas_expansion() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t m = 3; m <= 16; ++m) {
    testkit::for_all(2000 + m, 100, [&](testkit::Gen& g, std::size_t) {
      const auto xd = g.samples(m);
      const double want = testkit::dsdmas_expanded(xd);
      worst = std::max(worst, std::abs(dsdmas_pixel(xd) - want) / (1.0 + std::abs(want)));
    });
  }
  const double dt = seconds_since(t0);
  if (!(worst <= 1e-9) || !(dt < 1.0)) o.fail();
  o.note("max relative deviation from the term-by-term expansion: %.3g over M=3..16 x 100", worst);
  o.note("runtime %.3f s (limit 1 s)", dt);
  return o;
}

Outcome stage_one_identity() {
  Outcome o;
  double worst = 0.0;
  double worst_oracle = 0.0;
  testkit::for_all(3000, 100, [&](testkit::Gen& g, std::size_t) {
    const auto xd = g.samples(g.integer(3, 64));
    double sum = 0.0;
    for (double t : stage_one_terms(xd)) sum += t;
    const double dmas = dmas_pixel_naive(xd);
    const double pairs = testkit::dmas_pairs(xd);
    worst = std::max(worst, std::abs(sum - dmas) / (1.0 + std::abs(dmas)));
    worst_oracle = std::max(worst_oracle, std::abs(sum - pairs) / (1.0 + std::abs(pairs)));
  });
  if (!(worst <= 1e-9) || !(worst_oracle <= 1e-9)) o.fail();
  o.note("max |sum t - DMAS| relative: %.3g (library naive), %.3g (test oracle); 100 trials",
         worst, worst_oracle);
  return o;
}

Outcome op_counts() {
  Outcome o;
  const ImageGrid grid{-0.5 * kMm, 0.5 * kMm, 10 * kMm, 11 * kMm, 2, 3};
  std::size_t mismatches = 0;
  std::uint64_t spot[3] = {0, 0, 0};
  for (std::uint64_t m = 2; m <= 128; ++m) {
    const RfFrame frame = RfFrame::zeros(m, 8, Acquisition{});
    const auto delays = compute_delays(ArrayGeometry::linear(m, 0.3e-3, kC), grid, kFs);
    const std::uint64_t want[3] = {m, m * (m - 1) / 2 + 2 * (m - 1), m * (m - 1) + 3 * (m - 1)};
    for (int k = 0; k < 3; ++k) {
      if (k == 2 && m < 3) continue;
      const auto img = beamform_image(frame, delays, kKinds[k], BeamformOptions{1});
      if (img.per_pixel.total != want[k] || img.total.total != want[k] * grid.pixel_count()) {
        ++mismatches;
      }
      if (m == 128) spot[k] = img.per_pixel.total;
    }
  }
  if (mismatches != 0 || spot[0] != 128 || spot[1] != 8382 || spot[2] != 16637) o.fail();
  o.note("mismatches over M=2..128: %zu; M=128 per pixel: %llu / %llu / %llu", mismatches,
         static_cast<unsigned long long>(spot[0]), static_cast<unsigned long long>(spot[1]),
         static_cast<unsigned long long>(spot[2]));
  return o;
}

// --- 5-7: wire phantom ----------------------------------------------------

struct WireImages {
  Image img[3];
};

RfFrame wire_frame(double snr_db, std::uint64_t seed, unsigned threads) {
  const auto clean = synthesize_rf(make_wire_phantom(), array(), PulseModel{}, kFs, {threads});
  return add_noise(clean, NoiseSpec{snr_db, seed});
}

Outcome sidelobes(WireImages& out) {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rf = wire_frame(50.0, 7, 1);
  for (int k = 0; k < 3; ++k) out.img[k] = reconstruct_with(rf, kWireGrid, kKinds[k], 1);
  const double dt = seconds_since(t0);

  // Right-hand wire of each pair; profile over x in [0, 6] mm at its peak row.
  for (double depth : {35 * kMm, 55 * kMm}) {
    double sl[3];
    for (int k = 0; k < 3; ++k) {
      const double row = peak_row_depth(out.img[k], 1.5 * kMm, 1.5 * kMm, depth);
      sl[k] = sidelobe_level(lateral_profile(out.img[k], row).window(3 * kMm, 3 * kMm));
    }
    const bool ok = sl[1] <= sl[0] - 10.0 && sl[2] <= sl[1] - 8.0;
    if (!ok) o.fail();
    o.note("%2.0f mm: DAS %.1f dB, DMAS %.1f dB, DS-DMAS %.1f dB -> DMAS-DAS %+.1f (need <= -10), "
           "DS-DMAS-DMAS %+.1f (need <= -8) %s",
           depth / kMm, sl[0], sl[1], sl[2], sl[1] - sl[0], sl[2] - sl[1], ok ? "ok" : "MISS");
  }
  if (!(dt < 60.0)) o.fail();
  o.note("grid %zux%zu, M=%zu, 50 dB input SNR; simulate + 3 reconstructions single-threaded "
         "%.1f s (limit 60 s)",
         kWireGrid.nx, kWireGrid.nz, kElements, dt);
  return o;
}

Outcome fwhm_ordering(const WireImages& w) {
  Outcome o;
  struct Target {
    double x;
    double z;
  };
  std::vector<Target> targets;
  for (double z : single_wire_depths()) targets.push_back({0.0, z});
  for (double z : wire_pair_depths()) targets.push_back({1.5 * kMm, z});
  std::sort(targets.begin(), targets.end(), [](auto a, auto b) { return a.z < b.z; });

  for (const auto& t : targets) {
    double width[3];
    for (int k = 0; k < 3; ++k) {
      const double row = peak_row_depth(w.img[k], t.x, 1.5 * kMm, t.z);
      width[k] = fwhm(lateral_profile(w.img[k], row).window(t.x, 1.5 * kMm));
    }
    const bool ok = width[2] <= 0.95 * width[1] && width[1] <= 0.95 * width[0];
    if (!ok) o.fail();
    o.note("%2.0f mm (x=%.1f): DAS %.3f, DMAS %.3f, DS-DMAS %.3f mm; gaps %.1f%%, %.1f%% %s",
           t.z / kMm, t.x / kMm, width[0] / kMm, width[1] / kMm, width[2] / kMm,
           100.0 * (1.0 - width[1] / width[0]), 100.0 * (1.0 - width[2] / width[1]),
           ok ? "ok" : "MISS");
  }
  return o;
}

Outcome snr_ordering(unsigned threads) {
  Outcome o;
  const auto rf = wire_frame(-10.0, 7, threads);
  Image img[3];
  for (int k = 0; k < 3; ++k) img[k] = reconstruct_with(rf, kWireGrid, kKinds[k], threads);
  // Region right of the right-hand wire: x in [0, 6] mm, +-2 mm around its row.
  for (double depth : wire_pair_depths()) {
    double snr[3];
    for (int k = 0; k < 3; ++k) {
      const double row = peak_row_depth(img[k], 1.5 * kMm, 1.5 * kMm, depth);
      snr[k] = snr_region(img[k], RegionSpec::rect(3 * kMm, row, 3 * kMm, 2 * kMm));
    }
    const bool ok = snr[2] > snr[1] + 5.0 && snr[1] + 5.0 > snr[0] + 10.0;
    if (!ok) o.fail();
    o.note("%2.0f mm: DAS %.1f, DMAS %.1f, DS-DMAS %.1f dB -> DMAS-DAS %+.1f (need > 5), "
           "DS-DMAS-DMAS %+.1f (need > 5) %s",
           depth / kMm, snr[0], snr[1], snr[2], snr[1] - snr[0], snr[2] - snr[1],
           ok ? "ok" : "MISS");
  }
  o.note("input SNR -10 dB, noise seed 7");
  return o;
}

// --- 8: cysts --------------------------------------------------------------

Outcome cr_ordering(unsigned threads) {
  Outcome o;
  CystPhantomOptions opt;
  opt.wavelength = kC / kF0;
  const auto clean = synthesize_rf(make_cyst_phantom(opt), array(), PulseModel{}, kFs, {threads});
  const auto rf = add_noise(clean, NoiseSpec{20.0, 7});
  Image img[3];
  for (int k = 0; k < 3; ++k) img[k] = reconstruct_with(rf, kCystGrid, kKinds[k], threads);

  // 2 mm discs: inside the 4 mm cyst, and in speckle between the cyst columns.
  for (double depth : opt.depths) {
    const auto cyst = RegionSpec::disc(opt.large_x, depth, 2 * kMm);
    const auto bck = RegionSpec::disc(0.75 * kMm, depth, 2 * kMm);
    double cr[3];
    for (int k = 0; k < 3; ++k) cr[k] = contrast_ratio(img[k], cyst, bck);
    const bool ok = cr[2] <= cr[1] - 5.0 && cr[1] - 5.0 <= cr[0] - 10.0;
    if (!ok) o.fail();
    o.note("%2.0f mm: DAS %.1f, DMAS %.1f, DS-DMAS %.1f dB -> DMAS-DAS %+.1f (need <= -5), "
           "DS-DMAS-DMAS %+.1f (need <= -5) %s",
           depth / kMm, cr[0], cr[1], cr[2], cr[1] - cr[0], cr[2] - cr[1], ok ? "ok" : "MISS");
  }
  o.note("input SNR 20 dB, phantom seed %llu, noise seed 7",
         static_cast<unsigned long long>(opt.seed));
  return o;
}

// --- 9-11 --------------------------------------------------------------------

Outcome dsp_suite() {
  Outcome o;
  // The 2 f0 band at the RF rate, then each band at the line rate the
  // reconstruction grids actually filter at.
  const double line_fs = kWireGrid.axial_sample_rate(kC);
  struct Case {
    BeamformerKind kind;
    double fs;
  };
  for (const auto c : {Case{BeamformerKind::kDsDmas, kFs}, Case{BeamformerKind::kDsDmas, line_fs},
                       Case{BeamformerKind::kDas, line_fs}}) {
    const auto spec = FilterSpec::for_beamformer(c.kind, kF0);
    const double fs = c.fs;
    const auto taps = design_bandpass(spec, fs);
    const double dc_db = 20.0 * std::log10(fir_gain(taps, 0.0, fs));
    const auto dc_out = bandpass(std::vector<double>(1000, 1.0), spec, fs);
    double dc_peak = 0.0;
    for (double v : dc_out) dc_peak = std::max(dc_peak, std::abs(v));

    std::vector<double> tone(4000);
    for (std::size_t n = 0; n < tone.size(); ++n) {
      tone[n] = std::sin(2.0 * std::numbers::pi * spec.center * static_cast<double>(n) / fs);
    }
    const auto filtered = bandpass(tone, spec, fs);
    double pass = 0.0;
    for (std::size_t n = 1000; n < 3000; ++n) pass = std::max(pass, std::abs(filtered[n]));
    const double pass_db = 20.0 * std::log10(pass);
    const bool ok = dc_db <= -40.0 && 20.0 * std::log10(dc_peak) <= -40.0 && std::abs(pass_db) <= 1.0;
    if (!ok) o.fail();
    o.note("band %.1f MHz at %.1f MHz: DC gain %.1f dB (DC input peak %.1f dB), tone at centre %+.3f dB",
           spec.center / 1e6, fs / 1e6, dc_db, 20.0 * std::log10(dc_peak), pass_db);
  }

  std::vector<double> s(4000);
  for (std::size_t n = 0; n < s.size(); ++n) {
    s[n] = std::sin(2.0 * std::numbers::pi * kF0 * static_cast<double>(n) / kFs);
  }
  const auto env = envelope(s);
  double ripple = 0.0;
  for (std::size_t n = s.size() / 20; n < s.size() - s.size() / 20; ++n) {
    ripple = std::max(ripple, std::abs(env[n] - 1.0));
  }
  if (!(ripple <= 0.02)) o.fail();
  o.note("tone envelope max deviation %.4f (limit 0.02)", ripple);

  testkit::Gen g(9000);
  const ImageGrid grid{-5 * kMm, 5 * kMm, 10 * kMm, 20 * kMm, 41, 161};
  bool exact = true;
  double drift = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Image e(grid);
    for (auto& v : e.values) v = std::abs(g.gaussian(1)[0]);
    const auto ref = log_compress(e, 70.0);
    Image p2 = e;
    const double scale = std::ldexp(1.0, static_cast<int>(g.integer(0, 60)) - 30);
    for (auto& v : p2.values) v *= scale;
    exact = exact && log_compress(p2, 70.0).image == ref.image;
    Image any = e;
    const double alpha = g.uniform(1e-6, 1e6);
    for (auto& v : any.values) v *= alpha;
    const auto got = log_compress(any, 70.0);
    for (std::size_t k = 0; k < got.image.values.size(); ++k) {
      drift = std::max(drift, std::abs(got.image.values[k] - ref.image.values[k]));
    }
  }
  if (!exact || !(drift <= 1e-12)) o.fail();
  o.note("log-compress gain invariance: bit-identical for power-of-two gains: %s; "
         "max deviation for arbitrary gains %.2g dB",
         exact ? "yes" : "no", drift);
  return o;
}

Outcome noise_calibration(unsigned threads) {
  Outcome o;
  const auto clean = synthesize_rf(make_wire_phantom(), array(), PulseModel{}, kFs, {threads});
  double peak = 0.0;
  for (double v : clean.samples()) peak = std::max(peak, std::abs(v));
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : clean.samples()) {
    if (std::abs(v) > 0.01 * peak) {
      sum += v * v;
      ++n;
    }
  }
  const double power = sum / static_cast<double>(n);
  for (double target : {50.0, 20.0, 0.0, -10.0}) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto noisy = add_noise(clean, NoiseSpec{target, seed});
      double noise = 0.0;
      for (std::size_t k = 0; k < clean.samples().size(); ++k) {
        const double d = noisy.samples()[k] - clean.samples()[k];
        noise += d * d;
      }
      noise /= static_cast<double>(clean.samples().size());
      worst = std::max(worst, std::abs(10.0 * std::log10(power / noise) - target));
    }
    if (!(worst <= 0.5)) o.fail();
    o.note("target %+5.1f dB: worst realized error over 10 seeds %.4f dB (limit 0.5)", target, worst);
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "usbeam_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  RunConfig cfg;
  cfg.elements = kElements;
  cfg.noise_seed = 7;
  cfg.grid = ImageGrid{-5 * kMm, 5 * kMm, 30 * kMm, 66 * kMm, 51, 1170};
  cfg.algo = BeamformerKind::kDsDmas;
  write_file_atomic(dir / "regions.txt",
                    std::string_view("fwhm depth=40 x=1.5 window=1.5 search=1\n"
                                     "sidelobe depth=40 x=3 window=3 search=1\n"
                                     "snr x=3 z=45 hw=2 hd=2\n"));

  std::vector<std::string> artifacts[2];
  for (int pass = 0; pass < 2; ++pass) {
    const auto tag = dir / ("run" + std::to_string(pass));
    fs::create_directories(tag);
    cli::cmd_simulate(cfg, tag / "frame.urf");
    cli::cmd_beamform(cfg, tag / "frame.urf", tag / "image.uim", tag / "report.txt");
    write_file_atomic(tag / "metrics.csv", cli::cmd_metrics(tag / "image.uim", dir / "regions.txt"));
    for (const char* f : {"frame.urf", "image.uim", "report.txt", "metrics.csv"}) {
      const auto bytes = read_file(tag / f);
      artifacts[pass].emplace_back(bytes.begin(), bytes.end());
    }
  }
  const char* names[] = {"RF frame", "image", "report", "metrics"};
  for (std::size_t k = 0; k < 4; ++k) {
    const bool same = artifacts[0][k] == artifacts[1][k];
    if (!same) o.fail();
    o.note("%-8s %zu bytes, %s", names[k], artifacts[0][k].size(), same ? "identical" : "DIFFERENT");
  }
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail();
      o.note("exception: %s", e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", id, title, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  };

  WireImages wires;
  report(1, "DMAS fast and naive forms agree", dmas_equivalence);
  report(2, "DS-DMAS matches its term-by-term expansion", dsdmas_expansion);
  report(3, "stage-one terms sum to the DMAS output", stage_one_identity);
  report(4, "per-pixel operation counts", op_counts);
  report(5, "sidelobe ordering on the wire phantom", [&] { return sidelobes(wires); });
  report(6, "FWHM ordering at every wire depth", [&] { return fwhm_ordering(wires); });
  report(7, "SNR ordering at -10 dB input SNR", [] { return snr_ordering(0); });
  report(8, "contrast ratio ordering on the 4 mm cysts", [] { return cr_ordering(0); });
  report(9, "DSP chain", dsp_suite);
  report(10, "noise calibration", [] { return noise_calibration(0); });
  report(11, "pipeline determinism", determinism);

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
