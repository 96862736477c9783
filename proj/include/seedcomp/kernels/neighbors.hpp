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
#include <span>
#include <vector>

// Brute-force geometric search over packed xyz arrays (3 doubles per point).
// Preconditions are checked by the geometry layer; these kernels assume
// valid sizes. Ties are broken by the lowest index in all kernels.

namespace seedcomp::kernels {

/// k-nearest-neighbor result table, row-major (queries x k).
struct KnnTable {
  std::size_t k = 0;
  std::vector<std::size_t> indices;
  std::vector<double> distances;
};

namespace serial {
KnnTable knn(std::span<const double> queries, std::span<const double> reference,
             std::size_t k);
/// Greedy max-min subset of `count` points starting from `start`.
std::vector<std::size_t> farthest_point_sample(std::span<const double> points,
                                               std::size_t count,
                                               std::size_t start);
/// Per-query nearest reference index and squared distance.
void nearest(std::span<const double> queries, std::span<const double> reference,
             std::span<std::size_t> index, std::span<double> sq_dist);
}  // namespace serial

namespace parallel {
KnnTable knn(std::span<const double> queries, std::span<const double> reference,
             std::size_t k);
std::vector<std::size_t> farthest_point_sample(std::span<const double> points,
                                               std::size_t count,
                                               std::size_t start);
void nearest(std::span<const double> queries, std::span<const double> reference,
             std::span<std::size_t> index, std::span<double> sq_dist);
}  // namespace parallel

}  // namespace seedcomp::kernels
