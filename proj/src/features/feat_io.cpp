// src/features/feat_io.cpp

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

#include "stitchguard/features/feat_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace stitchguard {
namespace features {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_feat(const Matrix& values, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), ErrorKind::kIoFailure, "cannot open " + path.string());
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(values.rows()));
  put_u32(os, static_cast<std::uint32_t>(values.cols()));
  std::vector<float> row(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      row[static_cast<std::size_t>(c)] = static_cast<float>(values(r, c));
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  os.flush();
  require(os.good(), ErrorKind::kIoFailure, "write failed for " + path.string());
}

Matrix read_feat(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorKind::kIoFailure, "cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  require(is.good() && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::kCorruptHeader,
          "bad feature file magic: " + path.string());
  const std::uint32_t version = get_u32(is);
  require(version == kVersion, ErrorKind::kVersionMismatch,
          "unsupported feature file version");
  const std::uint32_t frames = get_u32(is);
  const std::uint32_t dim = get_u32(is);
  require(is.good(), ErrorKind::kCorruptHeader, "truncated feature header");

  Matrix values(frames, dim);
  std::vector<float> row(dim);
  for (std::uint32_t r = 0; r < frames; ++r) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    require(is.good(), ErrorKind::kIoFailure, "truncated feature data: " + path.string());
    for (std::uint32_t c = 0; c < dim; ++c) values(r, c) = row[c];
  }
  return values;
}

}  // namespace features
}  // namespace stitchguard
