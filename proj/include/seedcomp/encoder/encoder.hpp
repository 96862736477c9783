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
#include <string>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/generator/generators.hpp"
#include "seedcomp/geometry/point_cloud.hpp"
#include "seedcomp/nn/layers.hpp"

namespace seedcomp::encoder {

/// Patch centers of the partial input and one feature row per center.
struct PatchFeatures {
  PointCloud centers;
  ad::Tensor features;  // (N_p, C_p)
};

struct SetAbstractionOutput {
  PointCloud centers;
  ad::Tensor features;
};

/// FPS picks `out_points` centers; each center groups its k nearest input
/// points; the shared map lifts concat(p_j - c_i, f_j) to `out_channels`
/// and a channel-wise max over the group gives the center feature.
class SetAbstraction {
 public:
  SetAbstraction() = default;
  SetAbstraction(nn::ParameterStore& store, const std::string& prefix,
                 std::size_t in_channels, std::size_t out_points, std::size_t out_channels,
                 std::size_t k);

  /// `features` may be undefined (coordinates only).
  SetAbstractionOutput operator()(const PointCloud& cloud, const ad::Tensor& features) const;

  std::size_t out_points() const { return out_points_; }
  std::size_t out_channels() const { return out_channels_; }

 private:
  nn::Mlp2 mlp_;
  std::size_t in_channels_ = 0;
  std::size_t out_points_ = 0;
  std::size_t out_channels_ = 0;
  std::size_t k_ = 0;
};

/// Residual vector self-attention over kNN neighborhoods:
///   out = f + post( UpsampleTransformer_{rate 1, softmax}(pre(f)) )
class PointTransformerLayer {
 public:
  PointTransformerLayer(nn::ParameterStore& store, const std::string& prefix,
                        std::size_t channels, std::size_t k);

  ad::Tensor operator()(const PointCloud& cloud, const ad::Tensor& features) const;

 private:
  nn::Linear pre_;
  generator::UpsampleTransformer attention_;
  nn::Linear post_;
};

struct EncoderConfig {
  std::size_t sa1_points = 512;
  std::size_t sa1_channels = 128;
  std::size_t patches = 128;         // N_p
  std::size_t patch_channels = 256;  // C_p
  std::size_t k_group = 16;
  std::size_t k_attention = 16;
};

/// SA(sa1_channels, sa1_points) -> PT -> SA(patch_channels, patches) -> PT
class Encoder {
 public:
  Encoder(nn::ParameterStore& store, const std::string& prefix, const EncoderConfig& config);

  /// Requires at least max(sa1_points, 128) points.
  PatchFeatures operator()(const PointCloud& partial) const;
  const EncoderConfig& config() const { return config_; }
  std::size_t min_points() const;

 private:
  EncoderConfig config_;
  SetAbstraction sa1_;
  PointTransformerLayer pt1_;
  SetAbstraction sa2_;
  PointTransformerLayer pt2_;
};

}  // namespace seedcomp::encoder
