// include/stitchguard/model/checkpoint.hpp

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

// Checkpoint container: magic "STGD", u32 format version, length-prefixed
// canonical key=value text (model config plus metadata), a parameter table
// (name, rank, dims, 32-bit little-endian floats) holding parameters and
// batchnorm running statistics, and a CRC32 trailer over everything before
// it.

#ifndef STITCHGUARD_MODEL_CHECKPOINT_HPP_
#define STITCHGUARD_MODEL_CHECKPOINT_HPP_

#include <filesystem>

#include "stitchguard/config.hpp"
#include "stitchguard/model/model.hpp"

namespace stitchguard {
namespace model {

config::KvMap model_config_to_kv(const ModelConfig& cfg);
ModelConfig model_config_from_reader(config::KvReader& reader);

// Metadata keys (meta.*, feature.*, ...) ride along in the text section;
// model.* keys are reserved for the config.
void save_checkpoint(SpoofModel<float>& model, const config::KvMap& metadata,
                     const std::filesystem::path& path);

// Rebuilds the model from the embedded config.
SpoofModel<float> load_checkpoint(const std::filesystem::path& path,
                                  config::KvMap* metadata_out = nullptr);

// Loads parameters into an existing model; shapes must match its config.
void load_checkpoint_into(SpoofModel<float>& model,
                          const std::filesystem::path& path);

}  // namespace model
}  // namespace stitchguard

#endif  // STITCHGUARD_MODEL_CHECKPOINT_HPP_
