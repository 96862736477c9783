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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/autodiff/tape.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/encoder/encoder.hpp"
#include "test_support.hpp"

namespace seedcomp {
namespace {

using encoder::Encoder;
using encoder::EncoderConfig;
using encoder::PointTransformerLayer;
using encoder::SetAbstraction;

EncoderConfig small_config() {
  EncoderConfig c;
  c.sa1_points = 64;
  c.sa1_channels = 8;
  c.patches = 16;
  c.patch_channels = 12;
  c.k_group = 8;
  c.k_attention = 4;
  return c;
}

TEST(SetAbstraction, GroupMaxMatchesLoops) {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    std::mt19937_64 rng(trial);
    nn::ParameterStore store(trial);
    SetAbstraction sa(store, "sa", 0, 10, 6, 5);
    const auto cloud = testing::random_cloud(rng, 40);
    const auto out = sa(cloud, {});
    ASSERT_EQ(out.centers.size(), 10u);
    ASSERT_EQ(out.features.shape(), (ad::Shape{10, 6}));
    const auto picked = testing::fps_oracle(cloud, 10, 0);
    const auto nbr = testing::knn_oracle(out.centers, cloud, 5);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(out.centers[i], cloud[picked[i]]);
      testing::Row best(6, -1.0);
      for (std::size_t a = 0; a < 5; ++a) {
        const auto p = cloud[nbr[i * 5 + a]];
        const auto c = out.centers[i];
        const auto y = testing::mlp(store, "sa.mlp", {p[0] - c[0], p[1] - c[1], p[2] - c[2]},
                                    true);
        for (std::size_t ch = 0; ch < 6; ++ch) best[ch] = std::max(best[ch], y[ch]);
      }
      for (std::size_t ch = 0; ch < 6; ++ch) EXPECT_NEAR(out.features.at(i, ch), best[ch], 1e-12);
    }
  }
}

TEST(SetAbstraction, Contract) {
  std::mt19937_64 rng(1);
  nn::ParameterStore store(1);
  SetAbstraction coords_only(store, "a", 0, 20, 4, 4);
  EXPECT_THROW(coords_only(testing::random_cloud(rng, 10), {}), ContractError);
  SetAbstraction with_features(store, "b", 3, 5, 4, 4);
  const auto cloud = testing::random_cloud(rng, 10);
  EXPECT_THROW(with_features(cloud, {}), ShapeError);
  EXPECT_THROW(with_features(cloud, testing::random_tensor(rng, {10, 2}, -1, 1)), ShapeError);
  EXPECT_NO_THROW(with_features(cloud, testing::random_tensor(rng, {10, 3}, -1, 1)));
}

// With one neighbor each point attends only to itself, so rows are independent.
TEST(PointTransformer, SingleNeighborIsPointwise) {
  std::mt19937_64 rng(2);
  nn::ParameterStore store(2);
  PointTransformerLayer pt(store, "pt", 5, 1);
  const auto cloud = testing::random_cloud(rng, 12);
  auto f = testing::random_tensor(rng, {12, 5}, -1, 1);
  const auto a = pt(cloud, f);
  ASSERT_EQ(a.shape(), (ad::Shape{12, 5}));
  auto g = f.detach();
  for (std::size_t ch = 0; ch < 5; ++ch) g.mutable_values()[3 * 5 + ch] += 0.5;
  const auto b = pt(cloud, g);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t ch = 0; ch < 5; ++ch) {
      if (i == 3) continue;
      EXPECT_EQ(a.at(i, ch), b.at(i, ch));
    }
  }
}

TEST(Encoder, Shapes) {
  std::mt19937_64 rng(3);
  nn::ParameterStore store(3);
  Encoder enc(store, "enc", small_config());
  const auto cloud = testing::random_cloud(rng, 200);
  const auto out = enc(cloud);
  EXPECT_EQ(out.centers.size(), 16u);
  EXPECT_EQ(out.features.shape(), (ad::Shape{16, 12}));
  std::set<std::array<double, 3>> input;
  for (std::size_t i = 0; i < cloud.size(); ++i) input.insert(cloud[i]);
  for (std::size_t i = 0; i < out.centers.size(); ++i) EXPECT_TRUE(input.count(out.centers[i]));
}

TEST(Encoder, RejectsSmallInputs) {
  std::mt19937_64 rng(4);
  nn::ParameterStore store(4);
  Encoder enc(store, "enc", small_config());
  EXPECT_EQ(enc.min_points(), 128u);
  EXPECT_THROW(enc(testing::random_cloud(rng, 127)), ContractError);
  auto bad = small_config();
  bad.patches = 65;
  nn::ParameterStore s2(4);
  EXPECT_THROW(Encoder(s2, "enc", bad), ContractError);
}

TEST(Encoder, TranslationInvariantFeatures) {
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    std::mt19937_64 rng(10 + trial);
    nn::ParameterStore store(trial);
    Encoder enc(store, "enc", small_config());
    const auto cloud = testing::dyadic_cloud(rng, 160);
    const Vec3 shift{0.25, -0.5, 0.125};
    const auto a = enc(cloud);
    const auto b = enc(cloud.translated(shift));
    ASSERT_EQ(a.features.numel(), b.features.numel());
    for (std::size_t i = 0; i < a.features.numel(); ++i) {
      EXPECT_EQ(a.features.values()[i], b.features.values()[i]);
    }
    for (std::size_t i = 0; i < a.centers.size(); ++i) {
      for (int d = 0; d < 3; ++d) EXPECT_EQ(a.centers[i][d] + shift[d], b.centers[i][d]);
    }
  }
}

// The last attention bias is exempt: softmax ignores a per-channel shift.
TEST(Encoder, EveryParameterReceivesGradient) {
  std::mt19937_64 rng(5);
  nn::ParameterStore store(5);
  Encoder enc(store, "enc", small_config());
  const auto out = enc(testing::random_cloud(rng, 200));
  ad::backward(ad::sum(ad::mul(out.features, testing::random_tensor(rng, out.features.shape(),
                                                                    -1, 1))));
  for (const auto& p : store.parameters()) {
    double g = 0.0;
    for (double v : p.tensor.grad()) g = std::max(g, std::abs(v));
    if (p.name.ends_with(".alpha.0.1.bias")) {
      EXPECT_LT(g, 1e-10) << p.name;
    } else {
      EXPECT_GT(g, 0.0) << p.name;
    }
  }
}

}  // namespace
}  // namespace seedcomp
