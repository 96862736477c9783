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
#include <string>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/generator/attention.hpp"
#include "seedcomp/nn/layers.hpp"

// Point generators: each maps N points with per-point queries and keys to
// rate * N new feature rows. Row i * rate + m is the m-th replica of point
// i, so it lines up with a cloud where every point is duplicated `rate`
// times in place.

namespace seedcomp::generator {

enum class GeneratorKind { kUpsampleTransformer, kFolding, kDeconv, kGraphConv, kPointwise };

/// "uptrans", "folding", "deconv", "graphconv", "pointwise".
GeneratorKind parse_generator(const std::string& name);
std::string generator_name(GeneratorKind kind);

struct GeneratorDims {
  std::size_t query_channels = 0;
  std::size_t key_channels = 0;
  std::size_t channels = 0;       // C, width of generated features
  std::size_t seed_channels = 0;  // 0 disables the seed-feature encoding
  std::size_t rate = 1;
  std::size_t k = 1;              // neighborhood size
};

struct GeneratorInput {
  ad::Tensor queries;        // (N, query_channels)
  ad::Tensor keys;           // (N, key_channels)
  ad::Tensor positions;      // (N, 3)
  ad::Tensor seed_features;  // (N, seed_channels), undefined when unused
};

/// Per-kernel attention intermediates, captured for inspection.
struct AttentionTrace {
  std::vector<std::size_t> neighbors;  // N x k
  std::vector<ad::Tensor> logits;      // per kernel, (N, k, C) or (N, k, 1)
  std::vector<ad::Tensor> weights;     // same shapes, after normalization
};

class PointGenerator {
 public:
  explicit PointGenerator(const GeneratorDims& dims);
  virtual ~PointGenerator() = default;

  /// Returns (rate * N, channels).
  virtual ad::Tensor generate(const GeneratorInput& in,
                              AttentionTrace* trace = nullptr) const = 0;
  const GeneratorDims& dims() const { return dims_; }

 protected:
  /// Row counts, widths, and k <= N; returns N.
  std::size_t validate(const GeneratorInput& in) const;

  GeneratorDims dims_;
};

/// Vector self-attention generator:
///   a_ijm = norm_j( alpha_m( beta(q_i) - gamma(k_j) + delta_ij ) )
///   h_im  = sum_j a_ijm * ( psi(v_j) + delta_ij )
///   delta_ij = rho(p_i - p_j) [+ theta(s_i - s_j)]
///   v = value_map(concat(keys, queries))
/// Attention is channel-wise; every map is a two-layer per-point map and
/// alpha_m is independent per kernel.
class UpsampleTransformer final : public PointGenerator {
 public:
  UpsampleTransformer(nn::ParameterStore& store, const std::string& prefix,
                      const GeneratorDims& dims, AttentionMode mode);

  ad::Tensor generate(const GeneratorInput& in, AttentionTrace* trace = nullptr) const override;
  const AttentionMode& mode() const { return mode_; }

 private:
  AttentionMode mode_;
  nn::Mlp2 value_map_;
  nn::Mlp2 query_map_;   // beta
  nn::Mlp2 key_map_;     // gamma
  nn::Mlp2 psi_;
  nn::Mlp2 position_encoding_;  // rho
  nn::Mlp2 seed_encoding_;      // theta
  std::vector<nn::Mlp2> kernels_;  // alpha_m
};

/// Replica m of point i: map(concat(v_i, grid_m)) with a fixed 2D grid.
class FoldingGenerator final : public PointGenerator {
 public:
  FoldingGenerator(nn::ParameterStore& store, const std::string& prefix,
                   const GeneratorDims& dims);
  ad::Tensor generate(const GeneratorInput& in, AttentionTrace* trace = nullptr) const override;

  /// The fixed 2D offsets, row m for replica m.
  static std::vector<double> grid(std::size_t rate);

 private:
  nn::Mlp2 value_map_;
  nn::Mlp2 fold_;
};

/// Point splitting: replica m of point i is W_m v_i + b_m.
class DeconvGenerator final : public PointGenerator {
 public:
  DeconvGenerator(nn::ParameterStore& store, const std::string& prefix,
                  const GeneratorDims& dims);
  ad::Tensor generate(const GeneratorInput& in, AttentionTrace* trace = nullptr) const override;

 private:
  nn::Mlp2 value_map_;
  std::vector<nn::Linear> split_;
};

/// h_im = max_{j in N(i)} alpha_m(v_j), channel-wise.
class GraphConvGenerator final : public PointGenerator {
 public:
  GraphConvGenerator(nn::ParameterStore& store, const std::string& prefix,
                     const GeneratorDims& dims);
  ad::Tensor generate(const GeneratorInput& in, AttentionTrace* trace = nullptr) const override;

 private:
  nn::Mlp2 value_map_;
  std::vector<nn::Mlp2> kernels_;
};

/// Same structure as UpsampleTransformer but alpha_m yields one scalar
/// weight per neighbor, shared by all channels.
class PointwiseAttentionGenerator final : public PointGenerator {
 public:
  PointwiseAttentionGenerator(nn::ParameterStore& store, const std::string& prefix,
                              const GeneratorDims& dims, AttentionMode mode);
  ad::Tensor generate(const GeneratorInput& in, AttentionTrace* trace = nullptr) const override;

 private:
  AttentionMode mode_;
  nn::Mlp2 value_map_;
  nn::Mlp2 query_map_;
  nn::Mlp2 key_map_;
  nn::Mlp2 psi_;
  nn::Mlp2 position_encoding_;
  nn::Mlp2 seed_encoding_;
  std::vector<nn::Mlp2> kernels_;
};

std::unique_ptr<PointGenerator> make_generator(GeneratorKind kind, nn::ParameterStore& store,
                                               const std::string& prefix,
                                               const GeneratorDims& dims, AttentionMode mode);

}  // namespace seedcomp::generator
