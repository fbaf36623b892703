// src/model/checkpoint.cpp

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

#include "stitchguard/model/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

namespace stitchguard {
namespace model {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'G', 'D'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t crc32_update(std::uint32_t crc, const unsigned char* data,
                           std::size_t n) {
  static std::uint32_t table[256];
  static bool init = false;
  if (!init) {
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      table[i] = c;
    }
    init = true;
  }
  crc = ~crc;
  for (std::size_t i = 0; i < n; ++i)
    crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  return ~crc;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_ints(const int* v, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

class ByteSink {
 public:
  void u32(std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    bytes_.insert(bytes_.end(), b, b + 4);
  }
  void raw(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    bytes_.insert(bytes_.end(), c, c + n);
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteSource {
 public:
  ByteSource(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }
  const unsigned char* data() const { return bytes_.data(); }

  std::uint32_t u32() {
    need(4);
    const unsigned char* p = bytes_.data() + pos_;
    pos_ += 4;
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    require(pos_ + n <= bytes_.size(), ErrorKind::kIoFailure,
            "truncated checkpoint");
  }
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

struct NamedTensorRef {
  std::string name;
  nn::Tensor<float>* tensor;
};

std::vector<NamedTensorRef> all_entries(SpoofModel<float>& model) {
  std::vector<NamedTensorRef> entries;
  for (auto* p : model.params()) entries.push_back({p->name, &p->value});
  for (auto& [name, tensor] : model.buffers()) entries.push_back({name, tensor});
  return entries;
}

}  // namespace

config::KvMap model_config_to_kv(const ModelConfig& cfg) {
  config::KvMap kv;
  kv["model.block_counts"] = join_ints(cfg.block_counts.data(), 4);
  kv["model.widths"] = join_ints(cfg.widths.data(), 4);
  kv["model.fc_dim"] = std::to_string(cfg.fc1_dim);
  kv["model.frame_equivariant"] = cfg.frame_equivariant ? "true" : "false";
  kv["model.fc2_identity_activation"] =
      cfg.fc2_identity_activation ? "true" : "false";
  kv["model.pooling"] = pooling::pooling_kind_name(cfg.pooling.kind);
  kv["model.pool_heads"] = std::to_string(cfg.pooling.heads);
  kv["model.pool_dict_size"] = std::to_string(cfg.pooling.dict_size);
  kv["model.pool_attention_hidden"] = std::to_string(cfg.pooling.attention_hidden);
  std::string res;
  for (std::size_t i = 0; i < cfg.pooling.resolutions.size(); ++i) {
    if (i) res += ',';
    res += format_double(cfg.pooling.resolutions[i]);
  }
  kv["model.pool_resolutions"] = res;
  return kv;
}

ModelConfig model_config_from_reader(config::KvReader& reader) {
  ModelConfig cfg;
  const auto blocks = reader.get_int_list("model.block_counts", {3, 4, 6, 3});
  const auto widths = reader.get_int_list("model.widths", {64, 128, 256, 512});
  require(blocks.size() == 4 && widths.size() == 4, ErrorKind::kConfigError,
          "model.block_counts and model.widths need 4 entries");
  std::copy(blocks.begin(), blocks.end(), cfg.block_counts.begin());
  std::copy(widths.begin(), widths.end(), cfg.widths.begin());
  cfg.fc1_dim = cfg.fc2_dim = reader.get_int("model.fc_dim", 256);
  cfg.frame_equivariant = reader.get_bool("model.frame_equivariant", false);
  cfg.fc2_identity_activation =
      reader.get_bool("model.fc2_identity_activation", false);
  cfg.pooling.kind =
      pooling::pooling_kind_from_name(reader.get_string("model.pooling", "mh"));
  cfg.pooling.heads = reader.get_int("model.pool_heads", 4);
  cfg.pooling.dict_size = reader.get_int("model.pool_dict_size", 8);
  cfg.pooling.attention_hidden = reader.get_int("model.pool_attention_hidden", 32);
  cfg.pooling.resolutions =
      reader.get_double_list("model.pool_resolutions", {0.5, 1.0, 2.0});
  return cfg;
}

void save_checkpoint(SpoofModel<float>& model, const config::KvMap& metadata,
                     const std::filesystem::path& path) {
  config::KvMap kv = model_config_to_kv(model.config());
  for (const auto& [k, v] : metadata) {
    require(k.rfind("model.", 0) != 0, ErrorKind::kInvalidConfig,
            "metadata key collides with the model namespace: " + k);
    kv[k] = v;
  }
  const std::string text = config::dump_kv(kv);

  ByteSink sink;
  sink.raw(kMagic, 4);
  sink.u32(kVersion);
  sink.u32(static_cast<std::uint32_t>(text.size()));
  sink.raw(text.data(), text.size());

  const auto entries = all_entries(model);
  sink.u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    sink.u32(static_cast<std::uint32_t>(e.name.size()));
    sink.raw(e.name.data(), e.name.size());
    const auto& shape = e.tensor->shape();
    sink.u32(static_cast<std::uint32_t>(shape.size()));
    for (int d : shape) sink.u32(static_cast<std::uint32_t>(d));
    for (std::int64_t i = 0; i < e.tensor->size(); ++i) sink.f32((*e.tensor)[i]);
  }

  const std::uint32_t crc =
      crc32_update(0, sink.bytes().data(), sink.bytes().size());

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), ErrorKind::kIoFailure, "cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(sink.bytes().data()),
           static_cast<std::streamsize>(sink.bytes().size()));
  unsigned char trailer[4] = {static_cast<unsigned char>(crc & 0xff),
                              static_cast<unsigned char>((crc >> 8) & 0xff),
                              static_cast<unsigned char>((crc >> 16) & 0xff),
                              static_cast<unsigned char>((crc >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(trailer), 4);
  os.flush();
  require(os.good(), ErrorKind::kIoFailure, "write failed for " + path.string());
}

namespace {

// Shared tail of both load paths: verifies container integrity and copies
// the table into the model, every expected entry exactly once.
void fill_model_from_source(SpoofModel<float>& model, ByteSource& src) {
  const std::uint32_t n_entries = src.u32();
  std::map<std::string, std::pair<std::vector<int>, std::vector<float>>> table;
  for (std::uint32_t i = 0; i < n_entries; ++i) {
    const std::uint32_t name_len = src.u32();
    const std::string name = src.str(name_len);
    const std::uint32_t rank = src.u32();
    require(rank <= 8, ErrorKind::kIoFailure, "implausible tensor rank");
    std::vector<int> dims;
    std::int64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      dims.push_back(static_cast<int>(src.u32()));
      count *= dims.back();
    }
    std::vector<float> values(static_cast<std::size_t>(count));
    for (auto& v : values) v = src.f32();
    require(table.emplace(name, std::make_pair(dims, std::move(values))).second,
            ErrorKind::kShapeMismatch, "duplicate entry " + name);
  }

  auto refs = all_entries(model);
  require(refs.size() == table.size(), ErrorKind::kShapeMismatch,
          "checkpoint entry count does not match the model");
  for (auto& ref : refs) {
    const auto it = table.find(ref.name);
    require(it != table.end(), ErrorKind::kShapeMismatch,
            "checkpoint is missing " + ref.name);
    require(it->second.first == ref.tensor->shape(), ErrorKind::kShapeMismatch,
            "shape mismatch for " + ref.name);
    for (std::int64_t i = 0; i < ref.tensor->size(); ++i)
      (*ref.tensor)[i] = it->second.second[static_cast<std::size_t>(i)];
  }
}

ByteSource open_checkpoint(const std::filesystem::path& path, std::string* text) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorKind::kIoFailure, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  require(bytes.size() >= 12, ErrorKind::kIoFailure, "truncated checkpoint");

  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  const std::uint32_t computed =
      crc32_update(0, bytes.data(), bytes.size() - 4);
  require(stored_crc == computed, ErrorKind::kIoFailure,
          "checkpoint CRC mismatch");
  bytes.resize(bytes.size() - 4);

  ByteSource src(std::move(bytes));
  require(src.str(4) == std::string(kMagic, 4), ErrorKind::kVersionMismatch,
          "not a checkpoint file");
  require(src.u32() == kVersion, ErrorKind::kVersionMismatch,
          "unsupported checkpoint version");
  const std::uint32_t text_len = src.u32();
  *text = src.str(text_len);
  return src;
}

}  // namespace

SpoofModel<float> load_checkpoint(const std::filesystem::path& path,
                                  config::KvMap* metadata_out) {
  std::string text;
  ByteSource src = open_checkpoint(path, &text);
  const config::KvMap kv = config::parse_kv_text(text);

  config::KvMap model_kv, meta_kv;
  for (const auto& [k, v] : kv) {
    (k.rfind("model.", 0) == 0 ? model_kv : meta_kv)[k] = v;
  }
  config::KvReader reader(model_kv);
  const ModelConfig cfg = model_config_from_reader(reader);
  reader.finish();

  SpoofModel<float> model(cfg, 0);
  fill_model_from_source(model, src);
  if (metadata_out) *metadata_out = meta_kv;
  return model;
}

void load_checkpoint_into(SpoofModel<float>& model,
                          const std::filesystem::path& path) {
  std::string text;
  ByteSource src = open_checkpoint(path, &text);
  fill_model_from_source(model, src);
}

}  // namespace model
}  // namespace stitchguard
