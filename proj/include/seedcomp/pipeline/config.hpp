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
#include <map>
#include <string>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/generator/attention.hpp"
#include "seedcomp/generator/generators.hpp"

namespace seedcomp::pipeline {

/// Architecture hyperparameters. Serialized as flat `key = value` text.
struct ModelConfig {
  std::size_t input_points = 2048;
  std::size_t sa1_points = 512;
  std::size_t sa1_channels = 128;
  std::size_t patches = 128;          // N_p
  std::size_t patch_channels = 256;   // C_p
  std::size_t seed_rate = 2;          // N_s = seed_rate * N_p
  std::size_t seed_channels = 128;    // C_s
  std::size_t coarse_points = 512;    // N_0
  std::size_t channels = 128;         // C
  std::vector<std::size_t> rates{1, 4, 8};
  std::size_t k_group = 16;
  std::size_t k_attention = 16;
  std::size_t k_interp = 3;
  generator::AttentionMode seed_attention = generator::AttentionMode::none();
  generator::AttentionMode stage_attention = generator::AttentionMode::softmax();
  generator::GeneratorKind generator = generator::GeneratorKind::kUpsampleTransformer;
  ad::Precision precision = ad::Precision::kSingle;
  std::uint64_t seed = 0;

  /// Full-size architecture (16384-point output).
  static ModelConfig paper();
  /// Same with the 8192-point output rates.
  static ModelConfig paper_8k();
  /// Laptop-scale: 512 in, N_0 = 128, rates 1,2,2.
  static ModelConfig desk();

  std::size_t seed_count() const { return patches * seed_rate; }
  /// Point counts N_0, N_1, ..., N_L.
  std::vector<std::size_t> stage_sizes() const;

  /// Throws ContractError on an inconsistent configuration.
  void validate() const;

  /// Sets one field from its text form; unknown keys throw ContractError.
  void set(const std::string& key, const std::string& value);
  /// Ordered key/value view of every field.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;
  static ModelConfig from_text(const std::string& text);
};

/// Parses `key = value` lines; '#' starts a comment. Duplicate keys keep
/// the last value. Throws ParseError with the line number on bad lines.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

}  // namespace seedcomp::pipeline
