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
#include <numeric>
#include <random>
#include <set>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"
#include "test_support.hpp"

namespace seedcomp {
namespace {

using geometry::farthest_point_sample;
using geometry::interpolate_seed_features;
using geometry::knn;

TEST(PointCloud, RejectsNonFinite) {
  EXPECT_THROW(PointCloud({0.0, std::nan(""), 1.0}), NumericsError);
  EXPECT_THROW(PointCloud({0.0, 1.0}), ShapeError);
}

TEST(Fps, FarthestPair) {
  PointCloud c{{0, 0, 0}, {1, 0, 0}, {0.1, 0, 0}};
  EXPECT_EQ(farthest_point_sample(c, 2, 0), (std::vector<std::size_t>{0, 1}));
}

TEST(Fps, FullSampleIsPermutation) {
  std::mt19937_64 rng(1);
  const auto c = testing::random_cloud(rng, 40);
  auto idx = farthest_point_sample(c, 40, 3);
  EXPECT_EQ(idx.front(), 3u);
  std::sort(idx.begin(), idx.end());
  std::vector<std::size_t> all(40);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(idx, all);
}

TEST(Fps, ContractErrors) {
  PointCloud c{{0, 0, 0}, {1, 0, 0}};
  EXPECT_THROW(farthest_point_sample(c, 3, 0), ContractError);
  EXPECT_THROW(farthest_point_sample(c, 0, 0), ContractError);
  EXPECT_THROW(farthest_point_sample(c, 1, 2), ContractError);
}

TEST(Fps, MatchesGreedyOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 16 + rng() % 241;
    const auto c = testing::random_cloud(rng, n);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 32);
    const std::size_t start = rng() % n;
    EXPECT_EQ(farthest_point_sample(c, k, start), testing::fps_oracle(c, k, start)) << "trial " << t;
  }
}

TEST(Fps, MaxMinPropertyAndDistinct) {
  std::mt19937_64 rng(3);
  const auto c = testing::random_cloud(rng, 128);
  const auto idx = farthest_point_sample(c, 24, 0);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), idx.size());
  for (std::size_t s = 1; s < idx.size(); ++s) {
    auto min_to_prefix = [&](std::size_t i) {
      double m = 1e300;
      for (std::size_t p = 0; p < s; ++p) m = std::min(m, testing::dist(c[i], c[idx[p]]));
      return m;
    };
    const double chosen = min_to_prefix(idx[s]);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(min_to_prefix(i), chosen);
  }
}

TEST(Knn, SimpleLine) {
  PointCloud q{{0, 0, 0}};
  PointCloud r{{1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  const auto nb = knn(q, r, 2);
  EXPECT_EQ(nb.indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(nb.distances, (std::vector<double>{1.0, 2.0}));
}

TEST(Knn, SelfIsNearest) {
  std::mt19937_64 rng(4);
  const auto c = testing::random_cloud(rng, 50);
  const auto nb = knn(c, c, 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(nb.at(i, 0), i);
    EXPECT_EQ(nb.distances[i], 0.0);
  }
}

TEST(Knn, TooLargeK) {
  PointCloud c{{0, 0, 0}};
  EXPECT_THROW(knn(c, c, 2), ContractError);
  EXPECT_THROW(knn(c, c, 0), ContractError);
}

TEST(Knn, TiesBrokenByLowestIndex) {
  PointCloud q{{0, 0, 0}};
  PointCloud r{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}, {-1, 0, 0}};
  EXPECT_EQ(knn(q, r, 3).indices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Knn, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  const auto q = testing::random_cloud(rng, 128);
  const auto r = testing::random_cloud(rng, 256);
  EXPECT_EQ(knn(q, r, 8).indices, testing::knn_oracle(q, r, 8));
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 64, m = 1 + rng() % 256;
    const auto qq = testing::random_cloud(rng, n);
    const auto rr = testing::random_cloud(rng, m);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(m, 16);
    EXPECT_EQ(knn(qq, rr, k).indices, testing::knn_oracle(qq, rr, k)) << "trial " << t;
  }
}

TEST(Knn, DistancesSortedAndExact) {
  std::mt19937_64 rng(6);
  const auto q = testing::random_cloud(rng, 64);
  const auto r = testing::random_cloud(rng, 100);
  const auto nb = knn(q, r, 10);
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_NEAR(nb.distances[i * 10 + j], testing::dist(q[i], r[nb.at(i, j)]), 1e-6);
      if (j > 0) {
        EXPECT_LE(nb.distances[i * 10 + j - 1], nb.distances[i * 10 + j]);
      }
    }
  }
}

TEST(Interpolation, EquidistantAverage) {
  PointCloud q{{0, 0, 0}};
  PointCloud seeds{{1, 0, 0}, {-1, 0, 0}, {5, 0, 0}};
  auto f = ad::Tensor::from({3, 2}, {1, 10, 3, 20, 100, 100});
  const auto s = interpolate_seed_features(q, seeds, f, 2);
  EXPECT_DOUBLE_EQ(s.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(s.at(0, 1), 15.0);
}

TEST(Interpolation, CoincidentSeedDominates) {
  PointCloud q{{0.5, 0.5, 0.5}};
  PointCloud seeds{{0.5, 0.5, 0.5}, {1, 0, 0}, {0, 1, 0}};
  auto f = ad::Tensor::from({3, 1}, {7, -3, 4});
  const auto s = interpolate_seed_features(q, seeds, f, 3);
  EXPECT_NEAR(s.at(0, 0), 7.0, 7.0 * 1e-4);
}

TEST(Interpolation, InverseDistanceExample) {
  PointCloud q{{0, 0, 0}};
  PointCloud seeds{{1, 0, 0}, {2, 0, 0}, {4, 0, 0}};
  auto f = ad::Tensor::from({3, 1}, {1, 2, 3});
  const auto s = interpolate_seed_features(q, seeds, f, 3);
  EXPECT_NEAR(s.at(0, 0), 2.75 / 1.75, 1e-12);
}

TEST(Interpolation, ConvexCombination) {
  std::mt19937_64 rng(7);
  const auto seeds = testing::random_cloud(rng, 30);
  const auto q = testing::random_cloud(rng, 40);
  auto f = testing::random_tensor(rng, {30, 5}, -2, 2);
  const auto s = interpolate_seed_features(q, seeds, f, 3);
  const auto nb = knn(q, seeds, 3);
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t c = 0; c < 5; ++c) {
      double lo = 1e300, hi = -1e300;
      for (std::size_t j = 0; j < 3; ++j) {
        lo = std::min(lo, f.at(nb.at(i, j), c));
        hi = std::max(hi, f.at(nb.at(i, j), c));
      }
      EXPECT_GE(s.at(i, c), lo - 1e-12);
      EXPECT_LE(s.at(i, c), hi + 1e-12);
    }
  }
}

TEST(Interpolation, SeedOrderInvariant) {
  std::mt19937_64 rng(8);
  const auto seeds = testing::random_cloud(rng, 20);
  const auto q = testing::random_cloud(rng, 15);
  auto f = testing::random_tensor(rng, {20, 4}, -1, 1);
  std::vector<std::size_t> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto a = interpolate_seed_features(q, seeds, f, 3);
  const auto b = interpolate_seed_features(q, seeds.subset(perm), ad::gather_rows(f, perm), 3);
  for (std::size_t i = 0; i < a.numel(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-12);
}

TEST(Interpolation, Errors) {
  PointCloud q{{0, 0, 0}};
  EXPECT_THROW(interpolate_seed_features(q, PointCloud{}, ad::Tensor::zeros({0, 2}), 1),
               ContractError);
  PointCloud seeds{{1, 0, 0}};
  EXPECT_THROW(interpolate_seed_features(q, seeds, ad::Tensor::zeros({2, 2}), 1), ShapeError);
}

TEST(Fuse, IdenticalSetsCoverAllLocations) {
  std::mt19937_64 rng(9);
  const auto s = testing::random_cloud(rng, 20);
  const auto fused = geometry::fuse_and_resample(s, s, 20);
  std::set<Vec3> a, b;
  for (std::size_t i = 0; i < 20; ++i) {
    a.insert(s[i]);
    b.insert(fused[i]);
  }
  EXPECT_EQ(a, b);
}

TEST(Fuse, OnePointPerCluster) {
  PointCloud seeds{{0, 0, 0}, {0.01, 0, 0}};
  PointCloud partial{{1, 0, 0}, {1.01, 0, 0}};
  const auto fused = geometry::fuse_and_resample(seeds, partial, 2);
  EXPECT_LT(fused[0][0], 0.5);
  EXPECT_GT(fused[1][0], 0.5);
}

TEST(Fuse, MatchesOracleOnConcatenation) {
  std::mt19937_64 rng(10);
  const auto seeds = testing::random_cloud(rng, 256);
  const auto partial = testing::random_cloud(rng, 512);
  EXPECT_EQ(geometry::fuse_indices(seeds, partial, 512),
            testing::fps_oracle(concat(seeds, partial), 512, 0));
}

TEST(SelectionFreeze, ReplaysRecordedSelections) {
  std::mt19937_64 rng(11);
  const auto a = testing::random_cloud(rng, 30);
  const auto b = testing::random_cloud(rng, 30);
  geometry::SelectionFreeze freeze;
  const auto first = knn(a, a, 4);
  const auto picks = farthest_point_sample(a, 5, 0);
  freeze.rewind();
  EXPECT_TRUE(freeze.replaying());
  EXPECT_EQ(knn(b, b, 4).indices, first.indices);
  EXPECT_EQ(farthest_point_sample(b, 5, 0), picks);
  EXPECT_THROW(knn(b, b, 4), ContractError);  // nothing left to replay
}

}  // namespace
}  // namespace seedcomp
