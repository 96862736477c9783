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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "seedcomp/core/errors.hpp"
#include "seedcomp/pipeline/config.hpp"
#include "seedcomp/pipeline/trainer.hpp"

namespace seedcomp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Bad flags, unknown keys, missing inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Model fields plus the training schedule, read from one flat file.
struct RunConfig {
  pipeline::ModelConfig model = pipeline::ModelConfig::desk();
  pipeline::TrainOptions train;
  std::size_t steps = 200;
  std::size_t batch = 1;

  /// Model keys, or learning_rate, beta1, beta2, epsilon, decay,
  /// decay_every, steps, batch (clouds averaged into one update). Unknown keys throw UsageError.
  void set(const std::string& key, const std::string& value);
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;
};

/// "desk", "paper" or "paper_8k".
pipeline::ModelConfig preset(const std::string& name);

/// Preset, then the file's keys, then `overrides` ("key=value"), in order.
RunConfig resolve_config(const std::string& preset_name, const std::filesystem::path& file,
                         const std::vector<std::string>& overrides);

}  // namespace seedcomp::cli
