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

#include "seedcomp/pipeline/model.hpp"

#include <algorithm>
#include <numeric>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"

namespace seedcomp::pipeline {

namespace {

encoder::EncoderConfig encoder_config(const ModelConfig& c) {
  encoder::EncoderConfig e;
  e.sa1_points = c.sa1_points;
  e.sa1_channels = c.sa1_channels;
  e.patches = c.patches;
  e.patch_channels = c.patch_channels;
  e.k_group = c.k_group;
  e.k_attention = c.k_attention;
  return e;
}

generator::SeedGeneratorConfig seed_config(const ModelConfig& c) {
  generator::SeedGeneratorConfig s;
  s.patch_channels = c.patch_channels;
  s.seed_channels = c.seed_channels;
  s.seed_rate = c.seed_rate;
  s.k = std::min(c.k_attention, c.patches);
  s.kind = c.generator;
  s.mode = c.seed_attention;
  return s;
}

const ModelConfig& checked(const ModelConfig& c) {
  c.validate();
  return c;
}

}  // namespace

std::vector<ad::Tensor> ForwardResult::stage_clouds() const {
  std::vector<ad::Tensor> out;
  out.reserve(stages.size());
  for (const auto& s : stages) out.push_back(s.cloud);
  return out;
}

PointCloud canonical_order(const PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cloud[a] < cloud[b]; });
  return cloud.subset(order);
}

CompletionModel::CompletionModel(const ModelConfig& config)
    : config_(checked(config)),
      store_(config.seed),
      encoder_(store_, "encoder", encoder_config(config)),
      seed_generator_(store_, "seed", seed_config(config)),
      embedding_(store_, "embed", config.channels, config.seed_channels, config.k_interp) {
  const auto sizes = config.stage_sizes();
  layers_.reserve(config.rates.size());
  for (std::size_t l = 0; l < config.rates.size(); ++l) {
    generator::UpsampleLayerConfig u;
    u.channels = config.channels;
    u.seed_channels = config.seed_channels;
    u.rate = config.rates[l];
    u.k_attention = std::min(config.k_attention, sizes[l]);
    u.k_interp = config.k_interp;
    u.kind = config.generator;
    u.mode = config.stage_attention;
    layers_.emplace_back(store_, "stage" + std::to_string(l + 1), u);
  }
}

std::size_t CompletionModel::min_input_points() const { return encoder_.min_points(); }

ForwardResult CompletionModel::forward(const PointCloud& partial,
                                       std::vector<generator::AttentionTrace>* traces) const {
  ad::PrecisionScope precision(config_.precision);
  ForwardResult out;
  out.input = canonical_order(partial);
  out.patches = encoder_(out.input);
  out.seeds = seed_generator_(out.patches);

  const auto fused = geometry::fuse_indices(out.seeds.cloud(), out.input, config_.coarse_points);
  auto coarse = ad::gather_rows(ad::concat({out.seeds.coords, out.input.to_tensor()}, 0), fused);
  out.coarse = embedding_(coarse, out.seeds);

  if (traces) traces->assign(layers_.size(), {});
  const generator::StageState* state = &out.coarse;
  out.stages.reserve(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out.stages.push_back(layers_[l](*state, out.seeds, traces ? &(*traces)[l] : nullptr));
    state = &out.stages.back();
  }
  return out;
}

}  // namespace seedcomp::pipeline
