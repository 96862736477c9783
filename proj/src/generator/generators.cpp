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

#include "seedcomp/generator/generators.hpp"

#include <cmath>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"

namespace seedcomp::generator {

namespace {

struct Neighborhood {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> center;    // i repeated k times
  std::vector<std::size_t> neighbor;  // j in N(i)
};

Neighborhood neighborhood(const ad::Tensor& positions, std::size_t k) {
  const auto cloud = PointCloud::from_tensor(positions);
  auto nbr = geometry::knn(cloud, cloud, k);
  Neighborhood nb{cloud.size(), k, {}, std::move(nbr.indices)};
  nb.center.resize(nb.n * k);
  for (std::size_t i = 0; i < nb.n; ++i) {
    for (std::size_t j = 0; j < k; ++j) nb.center[i * k + j] = i;
  }
  return nb;
}

// (N*k, C): x_i - x_j for every (i, j in N(i)).
ad::Tensor pair_difference(const ad::Tensor& x, const Neighborhood& nb) {
  return ad::sub(ad::gather_rows(x, nb.center), ad::gather_rows(x, nb.neighbor));
}

// Interleaves per-kernel (N, C) outputs into (N * r, C), replica-minor.
ad::Tensor stack_replicas(const std::vector<ad::Tensor>& per_kernel) {
  if (per_kernel.size() == 1) return per_kernel.front();
  const std::size_t n = per_kernel.front().dim(0);
  const std::size_t c = per_kernel.front().dim(1);
  std::vector<ad::Tensor> parts;
  parts.reserve(per_kernel.size());
  for (const auto& h : per_kernel) parts.push_back(ad::reshape(h, {n, 1, c}));
  return ad::reshape(ad::concat(parts, 1), {n * per_kernel.size(), c});
}

// delta_ij = rho(p_i - p_j) [+ theta(s_i - s_j)], (N*k, C).
ad::Tensor relation_encoding(const GeneratorInput& in, const Neighborhood& nb,
                             const nn::Mlp2& rho, const nn::Mlp2& theta, bool with_seeds) {
  auto delta = rho(pair_difference(in.positions, nb));
  if (with_seeds) delta = ad::add(delta, theta(pair_difference(in.seed_features, nb)));
  return delta;
}

std::string kernel_name(const std::string& prefix, std::size_t m) {
  return prefix + ".alpha." + std::to_string(m);
}

}  // namespace

GeneratorKind parse_generator(const std::string& name) {
  if (name == "uptrans") return GeneratorKind::kUpsampleTransformer;
  if (name == "folding") return GeneratorKind::kFolding;
  if (name == "deconv") return GeneratorKind::kDeconv;
  if (name == "graphconv") return GeneratorKind::kGraphConv;
  if (name == "pointwise") return GeneratorKind::kPointwise;
  throw ContractError("unknown generator: " + name);
}

std::string generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kUpsampleTransformer:
      return "uptrans";
    case GeneratorKind::kFolding:
      return "folding";
    case GeneratorKind::kDeconv:
      return "deconv";
    case GeneratorKind::kGraphConv:
      return "graphconv";
    case GeneratorKind::kPointwise:
      return "pointwise";
  }
  return "uptrans";
}

PointGenerator::PointGenerator(const GeneratorDims& dims) : dims_(dims) {
  if (dims.rate == 0) throw ContractError("generator: rate must be >= 1");
  if (dims.k == 0) throw ContractError("generator: k must be >= 1");
  if (dims.channels == 0) throw ContractError("generator: channels must be >= 1");
}

std::size_t PointGenerator::validate(const GeneratorInput& in) const {
  if (!in.positions.defined() || in.positions.rank() != 2 || in.positions.dim(1) != 3) {
    throw ShapeError("generator: positions must be (N, 3)");
  }
  const std::size_t n = in.positions.dim(0);
  auto check = [n](const ad::Tensor& t, std::size_t width, const char* what) {
    if (!t.defined() || t.rank() != 2 || t.dim(0) != n || t.dim(1) != width) {
      throw ShapeError(std::string("generator: ") + what + " must be (" + std::to_string(n) +
                       ", " + std::to_string(width) + ")" +
                       (t.defined() ? ", got " + ad::shape_str(t.shape()) : ""));
    }
  };
  check(in.queries, dims_.query_channels, "queries");
  check(in.keys, dims_.key_channels, "keys");
  if (dims_.seed_channels > 0) check(in.seed_features, dims_.seed_channels, "seed features");
  if (dims_.k > n) {
    throw ContractError("generator: k=" + std::to_string(dims_.k) + " exceeds " +
                        std::to_string(n) + " points");
  }
  return n;
}

UpsampleTransformer::UpsampleTransformer(nn::ParameterStore& store, const std::string& prefix,
                                         const GeneratorDims& dims, AttentionMode mode)
    : PointGenerator(dims), mode_(mode) {
  const std::size_t c = dims.channels;
  value_map_ = nn::Mlp2(store, prefix + ".value", dims.key_channels + dims.query_channels, c, c);
  query_map_ = nn::Mlp2(store, prefix + ".beta", dims.query_channels, c, c);
  key_map_ = nn::Mlp2(store, prefix + ".gamma", dims.key_channels, c, c);
  psi_ = nn::Mlp2(store, prefix + ".psi", c, c, c);
  position_encoding_ = nn::Mlp2(store, prefix + ".rho", 3, c, c);
  if (dims.seed_channels > 0) {
    seed_encoding_ = nn::Mlp2(store, prefix + ".theta", dims.seed_channels, c, c);
  }
  for (std::size_t m = 0; m < dims.rate; ++m) {
    kernels_.emplace_back(store, kernel_name(prefix, m), c, c, c);
  }
}

ad::Tensor UpsampleTransformer::generate(const GeneratorInput& in, AttentionTrace* trace) const {
  const std::size_t n = validate(in);
  const std::size_t c = dims_.channels;
  const auto nb = neighborhood(in.positions, dims_.k);

  auto values = value_map_(ad::concat({in.keys, in.queries}, 1));
  auto delta = relation_encoding(in, nb, position_encoding_, seed_encoding_,
                                 dims_.seed_channels > 0);
  auto relation = ad::add(ad::sub(ad::gather_rows(query_map_(in.queries), nb.center),
                                  ad::gather_rows(key_map_(in.keys), nb.neighbor)),
                          delta);
  auto carried = ad::reshape(ad::add(ad::gather_rows(psi_(values), nb.neighbor), delta),
                             {n, dims_.k, c});

  if (trace) trace->neighbors = nb.neighbor;
  std::vector<ad::Tensor> per_kernel;
  per_kernel.reserve(kernels_.size());
  for (const auto& alpha : kernels_) {
    auto logits = ad::reshape(alpha(relation), {n, dims_.k, c});
    auto weights = normalize_attention(logits, 1, mode_);
    if (trace) {
      trace->logits.push_back(logits);
      trace->weights.push_back(weights);
    }
    per_kernel.push_back(ad::sum(ad::mul(weights, carried), 1));
  }
  return stack_replicas(per_kernel);
}

std::vector<double> FoldingGenerator::grid(std::size_t rate) {
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(rate))));
  std::vector<double> g;
  g.reserve(2 * rate);
  for (std::size_t m = 0; m < rate; ++m) {
    const std::size_t a = m / side;
    const std::size_t b = m % side;
    auto coord = [side](std::size_t t) {
      return side == 1 ? 0.0 : -0.2 + 0.4 * static_cast<double>(t) / static_cast<double>(side - 1);
    };
    g.push_back(coord(a));
    g.push_back(coord(b));
  }
  return g;
}

FoldingGenerator::FoldingGenerator(nn::ParameterStore& store, const std::string& prefix,
                                   const GeneratorDims& dims)
    : PointGenerator(dims) {
  const std::size_t c = dims.channels;
  value_map_ = nn::Mlp2(store, prefix + ".value", dims.key_channels + dims.query_channels, c, c);
  fold_ = nn::Mlp2(store, prefix + ".fold", c + 2, c, c);
}

ad::Tensor FoldingGenerator::generate(const GeneratorInput& in, AttentionTrace*) const {
  const std::size_t n = validate(in);
  const std::size_t r = dims_.rate;
  auto values = value_map_(ad::concat({in.keys, in.queries}, 1));
  std::vector<std::size_t> dup(n * r);
  for (std::size_t i = 0; i < n * r; ++i) dup[i] = i / r;
  const auto g = grid(r);
  std::vector<double> codes(n * r * 2);
  for (std::size_t i = 0; i < n * r; ++i) {
    codes[2 * i] = g[2 * (i % r)];
    codes[2 * i + 1] = g[2 * (i % r) + 1];
  }
  auto code_tensor = ad::Tensor::from({n * r, 2}, std::move(codes));
  return fold_(ad::concat({ad::gather_rows(values, dup), code_tensor}, 1));
}

DeconvGenerator::DeconvGenerator(nn::ParameterStore& store, const std::string& prefix,
                                 const GeneratorDims& dims)
    : PointGenerator(dims) {
  const std::size_t c = dims.channels;
  value_map_ = nn::Mlp2(store, prefix + ".value", dims.key_channels + dims.query_channels, c, c);
  for (std::size_t m = 0; m < dims.rate; ++m) {
    split_.emplace_back(store, prefix + ".split." + std::to_string(m), c, c);
  }
}

ad::Tensor DeconvGenerator::generate(const GeneratorInput& in, AttentionTrace*) const {
  validate(in);
  auto values = value_map_(ad::concat({in.keys, in.queries}, 1));
  std::vector<ad::Tensor> per_kernel;
  for (const auto& w : split_) per_kernel.push_back(w(values));
  return stack_replicas(per_kernel);
}

GraphConvGenerator::GraphConvGenerator(nn::ParameterStore& store, const std::string& prefix,
                                       const GeneratorDims& dims)
    : PointGenerator(dims) {
  const std::size_t c = dims.channels;
  value_map_ = nn::Mlp2(store, prefix + ".value", dims.key_channels + dims.query_channels, c, c);
  for (std::size_t m = 0; m < dims.rate; ++m) {
    kernels_.emplace_back(store, kernel_name(prefix, m), c, c, c);
  }
}

ad::Tensor GraphConvGenerator::generate(const GeneratorInput& in, AttentionTrace* trace) const {
  const std::size_t n = validate(in);
  const auto nb = neighborhood(in.positions, dims_.k);
  if (trace) trace->neighbors = nb.neighbor;
  auto neighbor_values =
      ad::gather_rows(value_map_(ad::concat({in.keys, in.queries}, 1)), nb.neighbor);
  std::vector<ad::Tensor> per_kernel;
  for (const auto& alpha : kernels_) {
    per_kernel.push_back(
        ad::max(ad::reshape(alpha(neighbor_values), {n, dims_.k, dims_.channels}), 1));
  }
  return stack_replicas(per_kernel);
}

PointwiseAttentionGenerator::PointwiseAttentionGenerator(nn::ParameterStore& store,
                                                         const std::string& prefix,
                                                         const GeneratorDims& dims,
                                                         AttentionMode mode)
    : PointGenerator(dims), mode_(mode) {
  const std::size_t c = dims.channels;
  value_map_ = nn::Mlp2(store, prefix + ".value", dims.key_channels + dims.query_channels, c, c);
  query_map_ = nn::Mlp2(store, prefix + ".beta", dims.query_channels, c, c);
  key_map_ = nn::Mlp2(store, prefix + ".gamma", dims.key_channels, c, c);
  psi_ = nn::Mlp2(store, prefix + ".psi", c, c, c);
  position_encoding_ = nn::Mlp2(store, prefix + ".rho", 3, c, c);
  if (dims.seed_channels > 0) {
    seed_encoding_ = nn::Mlp2(store, prefix + ".theta", dims.seed_channels, c, c);
  }
  for (std::size_t m = 0; m < dims.rate; ++m) {
    kernels_.emplace_back(store, kernel_name(prefix, m), c, c, 1);
  }
}

ad::Tensor PointwiseAttentionGenerator::generate(const GeneratorInput& in,
                                                 AttentionTrace* trace) const {
  const std::size_t n = validate(in);
  const std::size_t c = dims_.channels;
  const auto nb = neighborhood(in.positions, dims_.k);

  auto values = value_map_(ad::concat({in.keys, in.queries}, 1));
  auto delta = relation_encoding(in, nb, position_encoding_, seed_encoding_,
                                 dims_.seed_channels > 0);
  auto relation = ad::add(ad::sub(ad::gather_rows(query_map_(in.queries), nb.center),
                                  ad::gather_rows(key_map_(in.keys), nb.neighbor)),
                          delta);
  auto carried = ad::reshape(ad::add(ad::gather_rows(psi_(values), nb.neighbor), delta),
                             {n, dims_.k, c});

  if (trace) trace->neighbors = nb.neighbor;
  std::vector<ad::Tensor> per_kernel;
  for (const auto& alpha : kernels_) {
    auto logits = ad::reshape(alpha(relation), {n, dims_.k, 1});
    auto weights = normalize_attention(logits, 1, mode_);
    if (trace) {
      trace->logits.push_back(logits);
      trace->weights.push_back(weights);
    }
    per_kernel.push_back(ad::sum(ad::mul(ad::broadcast_last(weights, c), carried), 1));
  }
  return stack_replicas(per_kernel);
}

std::unique_ptr<PointGenerator> make_generator(GeneratorKind kind, nn::ParameterStore& store,
                                               const std::string& prefix,
                                               const GeneratorDims& dims, AttentionMode mode) {
  switch (kind) {
    case GeneratorKind::kUpsampleTransformer:
      return std::make_unique<UpsampleTransformer>(store, prefix, dims, mode);
    case GeneratorKind::kFolding:
      return std::make_unique<FoldingGenerator>(store, prefix, dims);
    case GeneratorKind::kDeconv:
      return std::make_unique<DeconvGenerator>(store, prefix, dims);
    case GeneratorKind::kGraphConv:
      return std::make_unique<GraphConvGenerator>(store, prefix, dims);
    case GeneratorKind::kPointwise:
      return std::make_unique<PointwiseAttentionGenerator>(store, prefix, dims, mode);
  }
  throw ContractError("make_generator: unknown kind");
}

}  // namespace seedcomp::generator
