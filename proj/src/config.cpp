// src/config.cpp

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

#include "stitchguard/config.hpp"

#include <fstream>
#include <sstream>

#include "stitchguard/common.hpp"

namespace stitchguard {
namespace config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

}  // namespace

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorKind::kConfigError,
            "line " + std::to_string(lineno) + " is not 'key = value': " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    require(!key.empty(), ErrorKind::kConfigError,
            "empty key on line " + std::to_string(lineno));
    require(kv.find(key) == kv.end(), ErrorKind::kConfigError,
            "duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KvMap parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIoFailure, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

std::string dump_kv(const KvMap& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string KvReader::get_string(const std::string& key, const std::string& fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

int KvReader::get_int(const std::string& key, int fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    require(pos == it->second.size(), ErrorKind::kConfigError, "");
    return v;
  } catch (...) {
    fail(ErrorKind::kConfigError, "key '" + key + "' is not an integer: " + it->second);
  }
}

double KvReader::get_double(const std::string& key, double fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    require(pos == it->second.size(), ErrorKind::kConfigError, "");
    return v;
  } catch (...) {
    fail(ErrorKind::kConfigError, "key '" + key + "' is not a number: " + it->second);
  }
}

bool KvReader::get_bool(const std::string& key, bool fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::kConfigError, "key '" + key + "' is not a boolean: " + v);
}

std::vector<int> KvReader::get_int_list(const std::string& key,
                                        const std::vector<int>& fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<int> out;
  for (const auto& part : split(it->second, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (...) {
      fail(ErrorKind::kConfigError, "key '" + key + "' has a bad integer: " + part);
    }
  }
  return out;
}

std::vector<double> KvReader::get_double_list(const std::string& key,
                                              const std::vector<double>& fallback) {
  seen_.insert(key);
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  for (const auto& part : split(it->second, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (...) {
      fail(ErrorKind::kConfigError, "key '" + key + "' has a bad number: " + part);
    }
  }
  return out;
}

void KvReader::finish() const {
  for (const auto& [k, v] : kv_) {
    require(seen_.count(k) > 0, ErrorKind::kConfigError, "unknown key '" + k + "'");
  }
}

}  // namespace config
}  // namespace stitchguard
