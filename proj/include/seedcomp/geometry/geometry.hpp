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

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/geometry/point_cloud.hpp"

namespace seedcomp::geometry {

/// k nearest reference points per query, nearest first.
struct NeighborIndex {
  std::size_t k = 0;
  std::vector<std::size_t> indices;  // queries x k
  std::vector<double> distances;     // queries x k, nondecreasing per row

  std::size_t rows() const { return k == 0 ? 0 : indices.size() / k; }
  std::size_t at(std::size_t row, std::size_t j) const { return indices[row * k + j]; }
};

/// Greedy max-min subset. The first index is `start`; each further pick
/// maximizes the distance to the already-picked set, lowest index on ties.
std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t k,
                                               std::size_t start = 0);

/// Brute-force kNN with (distance, index) ordering. A reference point equal
/// to the query is a valid neighbor of it.
NeighborIndex knn(const PointCloud& queries, const PointCloud& reference, std::size_t k);

/// Distance floor applied before inverting distances in interpolation.
/// Index of the nearest reference point for each query (ties to the lowest
/// index). Inputs are packed xyz.
std::vector<std::size_t> nearest_indices(std::span<const double> queries,
                                         std::span<const double> reference);

/// Records every FPS, kNN, and nearest-point selection made on this thread
/// while alive. After rewind(), the same calls return the recorded results
/// in order, so a computation can be re-evaluated with its piecewise-constant
/// choices held fixed.
class SelectionFreeze {
 public:
  SelectionFreeze();
  ~SelectionFreeze();
  SelectionFreeze(const SelectionFreeze&) = delete;
  SelectionFreeze& operator=(const SelectionFreeze&) = delete;

  /// Switches to replay (once something is recorded) and restarts from the
  /// first selection.
  void rewind();
  bool replaying() const { return replaying_; }

 private:
  friend struct SelectionAccess;
  std::vector<std::vector<std::size_t>> picks_;
  std::vector<NeighborIndex> tables_;
  std::size_t pick_cursor_ = 0;
  std::size_t table_cursor_ = 0;
  bool replaying_ = false;
  SelectionFreeze* previous_ = nullptr;
};

inline constexpr double kInterpolationEpsilon = 1e-8;

/// Inverse-distance weighted average of the features of each query's k
/// nearest seeds: s_i = sum_j w_ij f_j / sum_j w_ij, w_ij = 1 / max(d_ij, eps).
/// Weights are constants; the result is differentiable in `seed_features`
/// only. Returns (|queries|, C).
ad::Tensor interpolate_seed_features(const PointCloud& queries,
                                     const PointCloud& seed_coords,
                                     const ad::Tensor& seed_features, std::size_t k);

/// Indices (into the concatenation seeds ++ partial) of the FPS selection
/// of n0 points starting from index 0.
std::vector<std::size_t> fuse_indices(const PointCloud& seeds, const PointCloud& partial,
                                      std::size_t n0);

/// FPS-resampled fusion of seeds and the partial input (P_0).
PointCloud fuse_and_resample(const PointCloud& seeds, const PointCloud& partial,
                             std::size_t n0);

}  // namespace seedcomp::geometry
