// src/audio/wav.cpp

// Copyright 2026  StitchGuard Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "stitchguard/audio/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace audio {

namespace {

constexpr double kFullScale = 32768.0;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIoFailure, "cannot open " + path.string());

  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  require(!in.bad(), ErrorKind::kIoFailure, "read failed for " + path.string());
  require(bytes.size() >= 12, ErrorKind::kCorruptHeader, "file too small: " + path.string());
  require(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          ErrorKind::kCorruptHeader, "not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* p = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(p + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      fail(ErrorKind::kCorruptHeader, "truncated chunk in " + path.string());
    }
    if (std::memcmp(p, "fmt ", 4) == 0) {
      require(chunk_size >= 16, ErrorKind::kCorruptHeader, "fmt chunk too small");
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(p, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  require(have_fmt && data_ptr != nullptr, ErrorKind::kCorruptHeader,
          "missing fmt or data chunk: " + path.string());
  require(format == 1, ErrorKind::kUnsupportedFormat, "compressed WAV not supported");
  require(channels == 1, ErrorKind::kUnsupportedFormat, "only mono WAV supported");
  require(bits == 16, ErrorKind::kUnsupportedFormat, "only 16-bit PCM supported");
  require(sample_rate > 0, ErrorKind::kCorruptHeader, "zero sample rate");

  const std::size_t n = data_size / 2;
  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.samples.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::int16_t v =
        static_cast<std::int16_t>(read_u16(data_ptr + 2 * i));
    clip.samples[static_cast<Eigen::Index>(i)] = static_cast<double>(v) / kFullScale;
  }
  return clip;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  require(clip.sample_rate > 0, ErrorKind::kInvalidConfig, "sample_rate must be positive");
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = n * 2;

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
    long q = std::lround(clip.samples[i] * kFullScale);
    if (q > 32767) q = 32767;
    if (q < -32768) q = -32768;
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), ErrorKind::kIoFailure, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  os.flush();
  require(os.good(), ErrorKind::kIoFailure, "write failed for " + path.string());
}

}  // namespace audio
}  // namespace stitchguard
