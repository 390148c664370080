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

#include "usbeam/container.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace usbeam {

namespace {

class ByteWriter {
 public:
  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void f32(float v) { le(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }
  std::vector<std::uint8_t> take() { return std::move(out_); }
  std::size_t size() const { return out_.size(); }
  void reserve(std::size_t n) { out_.reserve(n); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::string raw(std::size_t n) {
    need(n);
    std::string s(b_.begin() + static_cast<long>(pos_), b_.begin() + static_cast<long>(pos_ + n));
    pos_ += n;
    return s;
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  float f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(le(4))); }
  double f64() { return std::bit_cast<double>(le(8)); }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw FormatError("container truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

struct Header {
  std::string magic;
  std::uint16_t version = 0;
  std::uint16_t count16 = 0;
  std::uint32_t count32 = 0;
  double values[4] = {};
};

void write_header(ByteWriter& w, std::string_view magic, std::uint16_t count16,
                  std::uint32_t count32, const double (&values)[4]) {
  w.raw(magic);
  w.u16(kContainerVersion);
  w.u16(count16);
  w.u32(count32);
  for (double v : values) w.f64(v);
  w.zeros(kHeaderBytes - w.size());
}

Header read_header(ByteReader& r, std::string_view expected_magic) {
  Header h;
  h.magic = r.raw(4);
  if (h.magic != expected_magic) {
    throw FormatError("bad magic: expected '" + std::string(expected_magic) + "'");
  }
  h.version = r.u16();
  if (h.version != kContainerVersion) {
    throw FormatError("unsupported container version " + std::to_string(h.version));
  }
  h.count16 = r.u16();
  h.count32 = r.u32();
  for (double& v : h.values) v = r.f64();
  r.skip(kHeaderBytes - 44);
  return h;
}

void check_size(std::size_t actual, std::size_t a, std::size_t b) {
  if (actual != kHeaderBytes + 4 * a * b) {
    throw FormatError("container size " + std::to_string(actual) + " does not match header (" +
                      std::to_string(kHeaderBytes + 4 * a * b) + " bytes expected)");
  }
}

float to_f32(double v) {
  if (std::abs(v) > static_cast<double>(std::numeric_limits<float>::max())) {
    throw std::range_error("sample exceeds float32 range");
  }
  return static_cast<float>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_rf(const RfFrame& frame) {
  if (frame.element_count() > std::numeric_limits<std::uint16_t>::max() ||
      frame.sample_count() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::range_error("RF frame too large for the container");
  }
  const auto& a = frame.acquisition();
  ByteWriter w;
  w.reserve(kHeaderBytes + 4 * frame.samples().size());
  write_header(w, kRfMagic, static_cast<std::uint16_t>(frame.element_count()),
               static_cast<std::uint32_t>(frame.sample_count()),
               {a.fs, a.f0, a.sound_speed, a.pitch});
  for (double v : frame.samples()) w.f32(to_f32(v));
  return w.take();
}

RfFrame decode_rf(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const Header h = read_header(r, kRfMagic);
  check_size(bytes.size(), h.count16, h.count32);
  std::vector<double> samples(static_cast<std::size_t>(h.count16) * h.count32);
  for (double& v : samples) v = r.f32();
  Acquisition acq{h.values[0], h.values[1], h.values[2], h.values[3]};
  try {
    return RfFrame(h.count16, h.count32, std::move(samples), acq);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid RF container: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_image(const Image& image) {
  const auto& g = image.grid;
  if (g.nx > std::numeric_limits<std::uint16_t>::max() ||
      g.nz > std::numeric_limits<std::uint32_t>::max()) {
    throw std::range_error("image too large for the container");
  }
  ByteWriter w;
  w.reserve(kHeaderBytes + 4 * image.values.size());
  write_header(w, kImageMagic, static_cast<std::uint16_t>(g.nx), static_cast<std::uint32_t>(g.nz),
               {g.x_min, g.x_max, g.z_min, g.z_max});
  for (double v : image.values) w.f32(to_f32(v));
  return w.take();
}

Image decode_image(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const Header h = read_header(r, kImageMagic);
  check_size(bytes.size(), h.count16, h.count32);
  ImageGrid g{h.values[0], h.values[1], h.values[2], h.values[3], h.count16, h.count32};
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid image container: ") + e.what());
  }
  std::vector<double> values(g.pixel_count());
  for (double& v : values) {
    v = r.f32();
    if (!std::isfinite(v)) throw FormatError("image container holds non-finite values");
  }
  return Image(g, std::move(values));
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at '" + path.string() +
                             "': " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_rf(const std::filesystem::path& path, const RfFrame& frame) {
  write_file_atomic(path, encode_rf(frame));
}

RfFrame read_rf(const std::filesystem::path& path) { return decode_rf(read_file(path)); }

void write_image(const std::filesystem::path& path, const Image& image) {
  write_file_atomic(path, encode_image(image));
}

Image read_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

std::uint8_t gray_level(double value_db, double dynamic_range_db) {
  const double level = std::round(255.0 * (value_db + dynamic_range_db) / dynamic_range_db);
  return static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
}

std::vector<std::uint8_t> encode_pgm(const DbImage& image) {
  const auto& g = image.image.grid;
  std::ostringstream head;
  head << "P5\n" << g.nx << ' ' << g.nz << "\n255\n";
  const std::string h = head.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(h.size() + g.pixel_count());
  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      out.push_back(gray_level(image.image.at(ix, iz), image.dynamic_range_db));
    }
  }
  return out;
}

}  // namespace usbeam
