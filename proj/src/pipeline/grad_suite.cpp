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

#include "seedcomp/pipeline/grad_suite.hpp"

#include <random>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/geometry/geometry.hpp"
#include "seedcomp/losses/losses.hpp"
#include "seedcomp/pipeline/model.hpp"
#include "seedcomp/pipeline/trainer.hpp"

namespace seedcomp::pipeline {

namespace {

using ad::GradCheckOptions;
using ad::GradCheckReport;
using ad::Tensor;

Tensor random_tensor(std::mt19937_64& rng, ad::Shape shape, double lo, double hi,
                     bool requires_grad) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(ad::shape_numel(shape));
  for (auto& x : v) x = u(rng);
  return Tensor::from(std::move(shape), std::move(v), requires_grad);
}

PointCloud random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(3 * n);
  for (auto& x : v) x = u(rng);
  return PointCloud(std::move(v));
}

// Central differences carry about 1e-11 * |f| of round-off while the
// relative-error floor is 1e-8, so checked scalars are kept near 1e-2.
constexpr double kOutputScale = 1e-2;

Tensor scaled(const Tensor& f) { return ad::scale(f, kOutputScale); }

/// Scalarizes a tensor with fixed random weights.
Tensor project(const Tensor& x, const Tensor& weights) {
  return scaled(ad::mean(ad::mul(x, weights)));
}

GradCheckReport check_generator(generator::GeneratorKind kind, generator::AttentionMode mode,
                                const GradCheckOptions& opts) {
  constexpr std::size_t n = 8, c = 4, cs = 3, rate = 2, k = 4;
  std::mt19937_64 rng(17);
  nn::ParameterStore store(5);
  const bool seeds = kind == generator::GeneratorKind::kUpsampleTransformer ||
                     kind == generator::GeneratorKind::kPointwise;
  auto gen = generator::make_generator(kind, store, "gen",
                                       {c, c, c, seeds ? cs : 0, rate, k}, mode);
  std::vector<Tensor> inputs{random_tensor(rng, {n, c}, -1, 1, true),
                             random_tensor(rng, {n, c}, -1, 1, true),
                             random_tensor(rng, {n, 3}, -1, 1, true)};
  if (seeds) inputs.push_back(random_tensor(rng, {n, cs}, -1, 1, true));
  for (const auto& p : store.parameters()) inputs.push_back(p.tensor);
  auto weights = random_tensor(rng, {n * rate, c}, -1, 1, false);

  auto fn = [&](const std::vector<Tensor>& x) {
    generator::GeneratorInput in{x[0], x[1], x[2], seeds ? x[3] : Tensor{}};
    return project(gen->generate(in), weights);
  };
  return ad::grad_check(fn, inputs, opts);
}

GradCheckReport check_interpolation(const GradCheckOptions& opts) {
  std::mt19937_64 rng(3);
  const auto seeds = random_cloud(rng, 12);
  const auto queries = random_cloud(rng, 8);
  auto features = random_tensor(rng, {12, 5}, -1, 1, true);
  auto weights = random_tensor(rng, {8, 5}, -1, 1, false);
  auto fn = [&](const std::vector<Tensor>& x) {
    return project(geometry::interpolate_seed_features(queries, seeds, x[0], 3), weights);
  };
  return ad::grad_check(fn, {features}, opts);
}

GradCheckReport check_chamfer(losses::ChamferNorm norm, const GradCheckOptions& opts) {
  std::mt19937_64 rng(norm == losses::ChamferNorm::kL1 ? 11 : 12);
  auto a = random_tensor(rng, {10, 3}, -1, 1, true);
  auto b = random_tensor(rng, {12, 3}, -1, 1, true);
  auto fn = [&](const std::vector<Tensor>& x) { return scaled(losses::chamfer(x[0], x[1], norm)); };
  return ad::grad_check(fn, {a, b}, opts);
}

GradCheckReport check_partial_matching(const GradCheckOptions& opts) {
  std::mt19937_64 rng(21);
  const auto partial = random_cloud(rng, 9);
  auto pred = random_tensor(rng, {14, 3}, -1, 1, true);
  auto fn = [&](const std::vector<Tensor>& x) {
    return scaled(losses::partial_matching_loss(partial, x[0]));
  };
  return ad::grad_check(fn, {pred}, opts);
}

GradCheckReport check_forward(const GradCheckOptions& opts) {
  const auto config = gradcheck_config();
  CompletionModel model(config);
  std::mt19937_64 rng(29);
  const auto partial = random_cloud(rng, config.input_points);
  const auto gt = random_cloud(rng, 2 * config.input_points);

  // Nonzero offsets so every stage's coordinates depend on the parameters.
  for (const auto& p : model.parameters().parameters()) {
    if (p.name.find(".offset.1.weight") == std::string::npos) continue;
    auto t = p.tensor;
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (auto& v : t.mutable_values()) v = u(rng);
  }

  std::vector<Tensor> inputs;
  for (const auto& p : model.parameters().parameters()) inputs.push_back(p.tensor);
  geometry::SelectionFreeze freeze;
  auto fn = [&](const std::vector<Tensor>&) {
    freeze.rewind();
    return scaled(training_loss(model.forward(partial), partial, gt).total);
  };
  auto limited = opts;
  if (limited.max_coords_per_input == 0) limited.max_coords_per_input = 4;
  return ad::grad_check(fn, inputs, limited);
}

}  // namespace

ModelConfig gradcheck_config() {
  ModelConfig c;
  c.input_points = 128;
  c.sa1_points = 64;
  c.sa1_channels = 8;
  c.patches = 16;
  c.patch_channels = 8;
  c.seed_rate = 2;
  c.seed_channels = 6;
  c.coarse_points = 32;
  c.channels = 8;
  c.rates = {1, 2};
  c.k_group = 8;
  c.k_attention = 4;
  c.k_interp = 3;
  c.precision = ad::Precision::kDouble;
  c.seed = 7;
  return c;
}

std::vector<GradCase> gradient_suite() {
  using generator::AttentionMode;
  using generator::GeneratorKind;
  std::vector<GradCase> suite;
  suite.push_back({"interpolation", check_interpolation});
  const std::pair<const char*, AttentionMode> modes[] = {
      {"uptrans.softmax", AttentionMode::softmax()},
      {"uptrans.none", AttentionMode::none()},
      {"uptrans.scaled", AttentionMode::scaled(0.5)},
      {"uptrans.log", AttentionMode::log()},
  };
  for (const auto& [name, mode] : modes) {
    suite.push_back({name, [mode](const GradCheckOptions& o) {
                       return check_generator(GeneratorKind::kUpsampleTransformer, mode, o);
                     }});
  }
  const std::pair<const char*, GeneratorKind> variants[] = {
      {"folding", GeneratorKind::kFolding},
      {"deconv", GeneratorKind::kDeconv},
      {"graphconv", GeneratorKind::kGraphConv},
      {"pointwise", GeneratorKind::kPointwise},
  };
  for (const auto& [name, kind] : variants) {
    suite.push_back({name, [kind](const GradCheckOptions& o) {
                       return check_generator(kind, AttentionMode::softmax(), o);
                     }});
  }
  suite.push_back({"chamfer.l1", [](const GradCheckOptions& o) {
                     return check_chamfer(losses::ChamferNorm::kL1, o);
                   }});
  suite.push_back({"chamfer.l2", [](const GradCheckOptions& o) {
                     return check_chamfer(losses::ChamferNorm::kL2, o);
                   }});
  suite.push_back({"partial_matching", check_partial_matching});
  suite.push_back({"forward", check_forward});
  return suite;
}

}  // namespace seedcomp::pipeline
