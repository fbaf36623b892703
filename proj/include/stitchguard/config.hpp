// include/stitchguard/config.hpp

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

// Plain-text configuration: `key = value` lines, '#' comments, keys
// namespaced per module (train.lr, specaug.f_pct, ...). Unknown keys are
// errors; KvReader tracks which keys were consumed.

#ifndef STITCHGUARD_CONFIG_HPP_
#define STITCHGUARD_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stitchguard {
namespace config {

using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap parse_kv_file(const std::filesystem::path& path);

// Canonical form: sorted keys, one "key = value" per line.
std::string dump_kv(const KvMap& kv);

class KvReader {
 public:
  explicit KvReader(KvMap kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback);
  int get_int(const std::string& key, int fallback);
  double get_double(const std::string& key, double fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback);
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback);

  // Throws ConfigError when any key was never consumed.
  void finish() const;

 private:
  KvMap kv_;
  std::set<std::string> seen_;
};

}  // namespace config
}  // namespace stitchguard

#endif  // STITCHGUARD_CONFIG_HPP_
