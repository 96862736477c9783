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

#include "seedcomp/generator/decoder.hpp"

#include <algorithm>
#include <ostream>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"

namespace seedcomp::generator {

std::vector<SeedOrigin> seed_provenance(std::size_t patches, std::size_t seed_rate) {
  std::vector<SeedOrigin> rows;
  rows.reserve(patches * seed_rate);
  for (std::size_t i = 0; i < patches; ++i) {
    for (std::size_t m = 0; m < seed_rate; ++m) rows.push_back({i * seed_rate + m, i, m});
  }
  return rows;
}

void write_seed_provenance(std::ostream& os, const std::vector<SeedOrigin>& rows) {
  os << "seed_index,source_patch_index,kernel_m\n";
  for (const auto& r : rows) os << r.seed_index << ',' << r.patch_index << ',' << r.kernel << '\n';
}

SeedGenerator::SeedGenerator(nn::ParameterStore& store, const std::string& prefix,
                             const SeedGeneratorConfig& config)
    : config_(config),
      query_proj_(store, prefix + ".query_proj", config.patch_channels, config.seed_channels),
      key_proj_(store, prefix + ".key_proj", config.patch_channels, config.seed_channels),
      generator_(make_generator(
          config.kind, store, prefix + ".gen",
          GeneratorDims{config.seed_channels, config.seed_channels, config.seed_channels, 0,
                        config.seed_rate, config.k},
          config.mode)),
      coord_map_(store, prefix + ".coord", config.seed_channels + config.patch_channels,
                 config.seed_channels, 3) {}

SeedSet SeedGenerator::operator()(const encoder::PatchFeatures& patches) const {
  const std::size_t n = patches.centers.size();
  if (patches.features.rank() != 2 || patches.features.dim(0) != n ||
      patches.features.dim(1) != config_.patch_channels) {
    throw ShapeError("seed_generate: patch features do not match the generator");
  }
  GeneratorInput in{query_proj_(patches.features), key_proj_(patches.features),
                    patches.centers.to_tensor(), {}};
  auto features = generator_->generate(in);

  const std::size_t seeds = n * config_.seed_rate;
  auto pooled = ad::max(ad::reshape(patches.features, {1, n, config_.patch_channels}), 1);
  std::vector<std::size_t> zeros(seeds, 0);
  auto context = ad::gather_rows(pooled, zeros);
  auto coords = coord_map_(ad::concat({features, context}, 1));
  return {coords, features};
}

CoarseEmbedding::CoarseEmbedding(nn::ParameterStore& store, const std::string& prefix,
                                 std::size_t channels, std::size_t seed_channels,
                                 std::size_t k_interp)
    : map_(store, prefix + ".embed", 3 + seed_channels, channels, channels),
      k_interp_(k_interp) {}

StageState CoarseEmbedding::operator()(const ad::Tensor& coarse, const SeedSet& seeds) const {
  const auto seed_cloud = seeds.cloud();
  auto interp = geometry::interpolate_seed_features(PointCloud::from_tensor(coarse), seed_cloud,
                                                    seeds.features,
                                                    std::min(k_interp_, seed_cloud.size()));
  return {coarse, map_(ad::concat({coarse, interp}, 1)), 1, interp};
}

UpsampleLayer::UpsampleLayer(nn::ParameterStore& store, const std::string& prefix,
                             const UpsampleLayerConfig& config)
    : config_(config),
      query_map_(store, prefix + ".query", config.channels + config.seed_channels,
                 config.channels, config.channels),
      generator_(make_generator(config.kind, store, prefix + ".gen",
                                GeneratorDims{config.channels, config.channels, config.channels,
                                              config.seed_channels, config.rate,
                                              config.k_attention},
                                config.mode)),
      offset_map_(store, prefix + ".offset", config.channels, config.channels, 3, false, true) {}

StageState UpsampleLayer::operator()(const StageState& state, const SeedSet& seeds,
                                     AttentionTrace* trace) const {
  if (!state.interpolated_seed_features.defined()) {
    throw ContractError("upsample_layer: interpolated seed features are missing");
  }
  const std::size_t n = state.size();
  auto queries = query_map_(ad::concat({state.features, state.interpolated_seed_features}, 1));
  GeneratorInput in{queries, state.features, state.cloud, state.interpolated_seed_features};
  auto h = generator_->generate(in, trace);

  const std::size_t r = config_.rate;
  std::vector<std::size_t> dup(n * r);
  for (std::size_t i = 0; i < dup.size(); ++i) dup[i] = i / r;
  auto cloud = ad::add(ad::gather_rows(state.cloud, dup), offset_map_(h));

  const auto seed_cloud = seeds.cloud();
  auto interp = geometry::interpolate_seed_features(
      PointCloud::from_tensor(cloud), seed_cloud, seeds.features,
      std::min(config_.k_interp, seed_cloud.size()));
  return {cloud, h, r, interp};
}

}  // namespace seedcomp::generator
