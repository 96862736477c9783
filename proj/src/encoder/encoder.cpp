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

#include "seedcomp/encoder/encoder.hpp"

#include <algorithm>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"

namespace seedcomp::encoder {

SetAbstraction::SetAbstraction(nn::ParameterStore& store, const std::string& prefix,
                               std::size_t in_channels, std::size_t out_points,
                               std::size_t out_channels, std::size_t k)
    : mlp_(store, prefix + ".mlp", 3 + in_channels, out_channels, out_channels, true),
      in_channels_(in_channels),
      out_points_(out_points),
      out_channels_(out_channels),
      k_(k) {}

SetAbstractionOutput SetAbstraction::operator()(const PointCloud& cloud,
                                                const ad::Tensor& features) const {
  if (out_points_ > cloud.size()) {
    throw ContractError("set_abstraction: " + std::to_string(out_points_) +
                        " centers requested from " + std::to_string(cloud.size()) + " points");
  }
  const bool has_features = features.defined();
  if (has_features != (in_channels_ > 0) ||
      (has_features && (features.rank() != 2 || features.dim(0) != cloud.size() ||
                        features.dim(1) != in_channels_))) {
    throw ShapeError("set_abstraction: input features do not match the layer");
  }
  const auto picked = geometry::farthest_point_sample(cloud, out_points_, 0);
  auto centers = cloud.subset(picked);
  const std::size_t k = std::min(k_, cloud.size());
  const auto nbr = geometry::knn(centers, cloud, k);

  std::vector<std::size_t> owner(out_points_ * k);
  for (std::size_t i = 0; i < owner.size(); ++i) owner[i] = i / k;
  auto grouped = ad::sub(ad::gather_rows(cloud.to_tensor(), nbr.indices),
                         ad::gather_rows(centers.to_tensor(), owner));
  if (has_features) grouped = ad::concat({grouped, ad::gather_rows(features, nbr.indices)}, 1);
  auto lifted = ad::reshape(mlp_(grouped), {out_points_, k, out_channels_});
  return {std::move(centers), ad::max(lifted, 1)};
}

PointTransformerLayer::PointTransformerLayer(nn::ParameterStore& store,
                                             const std::string& prefix, std::size_t channels,
                                             std::size_t k)
    : pre_(store, prefix + ".pre", channels, channels),
      attention_(store, prefix + ".attn",
                 generator::GeneratorDims{channels, channels, channels, 0, 1, k},
                 generator::AttentionMode::softmax()),
      post_(store, prefix + ".post", channels, channels) {}

ad::Tensor PointTransformerLayer::operator()(const PointCloud& cloud,
                                             const ad::Tensor& features) const {
  auto x = pre_(features);
  generator::GeneratorInput in{x, x, cloud.to_tensor(), {}};
  return ad::add(features, post_(attention_.generate(in)));
}

Encoder::Encoder(nn::ParameterStore& store, const std::string& prefix,
                 const EncoderConfig& config)
    : config_(config),
      sa1_(store, prefix + ".sa1", 0, config.sa1_points, config.sa1_channels, config.k_group),
      pt1_(store, prefix + ".pt1", config.sa1_channels,
           std::min(config.k_attention, config.sa1_points)),
      sa2_(store, prefix + ".sa2", config.sa1_channels, config.patches, config.patch_channels,
           config.k_group),
      pt2_(store, prefix + ".pt2", config.patch_channels,
           std::min(config.k_attention, config.patches)) {
  if (config.patches > config.sa1_points) {
    throw ContractError("encoder: patch count exceeds first-stage point count");
  }
}

std::size_t Encoder::min_points() const { return std::max<std::size_t>(128, config_.sa1_points); }

PatchFeatures Encoder::operator()(const PointCloud& partial) const {
  if (partial.size() < min_points()) {
    throw ContractError("encode: need at least " + std::to_string(min_points()) +
                        " input points, got " + std::to_string(partial.size()));
  }
  auto s1 = sa1_(partial, {});
  auto f1 = pt1_(s1.centers, s1.features);
  auto s2 = sa2_(s1.centers, f1);
  auto f2 = pt2_(s2.centers, s2.features);
  return {std::move(s2.centers), f2};
}

}  // namespace seedcomp::encoder
