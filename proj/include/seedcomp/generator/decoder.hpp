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
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/encoder/encoder.hpp"
#include "seedcomp/generator/generators.hpp"
#include "seedcomp/geometry/point_cloud.hpp"
#include "seedcomp/nn/layers.hpp"

namespace seedcomp::generator {

/// Patch Seeds: seed coordinates and one feature row per seed.
struct SeedSet {
  ad::Tensor coords;    // (N_s, 3)
  ad::Tensor features;  // (N_s, C_s)

  std::size_t size() const { return coords.dim(0); }
  PointCloud cloud() const { return PointCloud::from_tensor(coords); }
};

/// One decoder stage: P_l, its per-point features (the next layer's keys),
/// the rate that produced it, and seed features interpolated onto it.
struct StageState {
  ad::Tensor cloud;                       // (N_l, 3)
  ad::Tensor features;                    // (N_l, C)
  std::size_t rate = 1;
  ad::Tensor interpolated_seed_features;  // (N_l, C_s)

  std::size_t size() const { return cloud.dim(0); }
  PointCloud points() const { return PointCloud::from_tensor(cloud); }
};

/// Which patch and kernel produced each seed.
struct SeedOrigin {
  std::size_t seed_index;
  std::size_t patch_index;
  std::size_t kernel;
};

std::vector<SeedOrigin> seed_provenance(std::size_t patches, std::size_t seed_rate);

/// Comma-delimited table with a header row.
void write_seed_provenance(std::ostream& os, const std::vector<SeedOrigin>& rows);

struct SeedGeneratorConfig {
  std::size_t patch_channels = 256;  // C_p
  std::size_t seed_channels = 128;   // C_s
  std::size_t seed_rate = 2;
  std::size_t k = 16;
  GeneratorKind kind = GeneratorKind::kUpsampleTransformer;
  AttentionMode mode = AttentionMode::none();
};

/// F = generator(q = Wq F_p, k = Wk F_p) over patch centers without seed
/// encoding; S = map(concat(F, maxpool(F_p))).
class SeedGenerator {
 public:
  SeedGenerator(nn::ParameterStore& store, const std::string& prefix,
                const SeedGeneratorConfig& config);

  SeedSet operator()(const encoder::PatchFeatures& patches) const;
  const SeedGeneratorConfig& config() const { return config_; }

 private:
  SeedGeneratorConfig config_;
  nn::Linear query_proj_;
  nn::Linear key_proj_;
  std::unique_ptr<PointGenerator> generator_;
  nn::Mlp2 coord_map_;
};

struct UpsampleLayerConfig {
  std::size_t channels = 128;       // C
  std::size_t seed_channels = 128;  // C_s
  std::size_t rate = 1;
  std::size_t k_attention = 16;
  std::size_t k_interp = 3;
  GeneratorKind kind = GeneratorKind::kUpsampleTransformer;
  AttentionMode mode = AttentionMode::softmax();
};

/// Builds P_0's state: features = map(concat(P_0, s^0)).
class CoarseEmbedding {
 public:
  CoarseEmbedding(nn::ParameterStore& store, const std::string& prefix, std::size_t channels,
                  std::size_t seed_channels, std::size_t k_interp);

  StageState operator()(const ad::Tensor& coarse, const SeedSet& seeds) const;

 private:
  nn::Mlp2 map_;
  std::size_t k_interp_;
};

/// q = map(concat(keys, s^l)); H = generator(q, keys); P_{l+1} = dup(P_l) +
/// offsets(H). H becomes the next layer's keys.
class UpsampleLayer {
 public:
  UpsampleLayer(nn::ParameterStore& store, const std::string& prefix,
                const UpsampleLayerConfig& config);

  StageState operator()(const StageState& state, const SeedSet& seeds,
                        AttentionTrace* trace = nullptr) const;
  const UpsampleLayerConfig& config() const { return config_; }

 private:
  UpsampleLayerConfig config_;
  nn::Mlp2 query_map_;
  std::unique_ptr<PointGenerator> generator_;
  nn::Mlp2 offset_map_;
};

}  // namespace seedcomp::generator
