// src/audio/manifest.cpp

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

#include "stitchguard/audio/manifest.hpp"

#include <fstream>
#include <string>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace audio {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::filesystem::path> read_path_manifest(
    const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  require(in.good(), ErrorKind::kIoFailure, "cannot open manifest " + manifest.string());
  const auto base = manifest.has_parent_path() ? manifest.parent_path()
                                               : std::filesystem::path(".");
  std::vector<std::filesystem::path> paths;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::filesystem::path p(t);
    paths.push_back(p.is_absolute() ? p : base / p);
  }
  return paths;
}

}  // namespace audio
}  // namespace stitchguard
