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
#include <memory>
#include <vector>

#include "seedcomp/encoder/encoder.hpp"
#include "seedcomp/generator/decoder.hpp"
#include "seedcomp/geometry/point_cloud.hpp"
#include "seedcomp/nn/layers.hpp"
#include "seedcomp/pipeline/config.hpp"

namespace seedcomp::pipeline {

struct ForwardResult {
  PointCloud input;  // canonically ordered copy of the partial input
  encoder::PatchFeatures patches;
  generator::SeedSet seeds;
  generator::StageState coarse;               // P_0
  std::vector<generator::StageState> stages;  // P_1 .. P_L

  const ad::Tensor& prediction() const { return stages.back().cloud; }
  /// Coordinate tensors of P_1 .. P_L.
  std::vector<ad::Tensor> stage_clouds() const;
};

/// Sorts points lexicographically by (x, y, z).
PointCloud canonical_order(const PointCloud& cloud);

class CompletionModel {
 public:
  explicit CompletionModel(const ModelConfig& config);
  CompletionModel(const CompletionModel&) = delete;
  CompletionModel& operator=(const CompletionModel&) = delete;

  /// Needs at least `min_input_points()` points. When `traces` is non-null it
  /// receives one attention trace per upsample layer.
  ForwardResult forward(const PointCloud& partial,
                        std::vector<generator::AttentionTrace>* traces = nullptr) const;

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore& parameters() { return store_; }
  const nn::ParameterStore& parameters() const { return store_; }
  std::size_t parameter_count() const { return store_.scalar_count(); }
  std::size_t min_input_points() const;

 private:
  ModelConfig config_;
  nn::ParameterStore store_;
  encoder::Encoder encoder_;
  generator::SeedGenerator seed_generator_;
  generator::CoarseEmbedding embedding_;
  std::vector<generator::UpsampleLayer> layers_;
};

}  // namespace seedcomp::pipeline
