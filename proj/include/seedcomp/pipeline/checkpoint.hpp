// Copyright 2026 The seedcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/pipeline/config.hpp"
#include "seedcomp/pipeline/model.hpp"
#include "seedcomp/pipeline/trainer.hpp"

namespace seedcomp::pipeline {

inline constexpr char kCheckpointMagic[4] = {'S', 'D', 'C', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TensorRecord {
  std::string name;
  ad::Shape shape;
  std::vector<float> values;
};

/// Layout, all integers little-endian:
///   "SDCP" | u32 version | u32 len, config text | u64 optimizer step |
///   u32 record count | records
/// record: u32 len, name | u32 rank | u32 extents[rank] | f32 values[]
/// Parameters come first in model order; Adam moments follow as
/// "adam.m/<name>" and "adam.v/<name>" when an optimizer state is saved.
struct CheckpointData {
  std::string config_text;
  std::uint64_t optimizer_step = 0;
  std::vector<TensorRecord> records;
};

void write_checkpoint(std::ostream& os, const CheckpointData& data);
/// Throws FormatError on bad magic, unknown version, or truncation.
CheckpointData read_checkpoint(std::istream& is);

void save_checkpoint(const std::filesystem::path& path, const CompletionModel& model,
                     const AdamState* optimizer = nullptr);

/// Copies parameters into `model`. Throws FormatError naming the first
/// parameter whose name or shape differs. Returns the optimizer state when
/// the file carries one.
std::optional<AdamState> load_into(const std::filesystem::path& path, CompletionModel& model);

/// Reads only the configuration block.
ModelConfig read_checkpoint_config(const std::filesystem::path& path);

}  // namespace seedcomp::pipeline
