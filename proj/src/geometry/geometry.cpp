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

#include "seedcomp/geometry/geometry.hpp"

#include <algorithm>
#include <string>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/kernels/neighbors.hpp"

namespace seedcomp::geometry {

namespace {
thread_local SelectionFreeze* active_freeze = nullptr;
}  // namespace

struct SelectionAccess {
  template <typename Fn>
  static std::vector<std::size_t> pick(std::size_t expected, Fn&& compute) {
    auto* f = active_freeze;
    if (f == nullptr) return compute();
    if (f->replaying_) {
      if (f->pick_cursor_ >= f->picks_.size() || f->picks_[f->pick_cursor_].size() != expected) {
        throw ContractError("selection replay out of sync");
      }
      return f->picks_[f->pick_cursor_++];
    }
    f->picks_.push_back(compute());
    return f->picks_.back();
  }

  template <typename Fn>
  static NeighborIndex table(std::size_t rows, std::size_t k, Fn&& compute) {
    auto* f = active_freeze;
    if (f == nullptr) return compute();
    if (f->replaying_) {
      if (f->table_cursor_ >= f->tables_.size() || f->tables_[f->table_cursor_].k != k ||
          f->tables_[f->table_cursor_].rows() != rows) {
        throw ContractError("selection replay out of sync");
      }
      return f->tables_[f->table_cursor_++];
    }
    f->tables_.push_back(compute());
    return f->tables_.back();
  }
};

SelectionFreeze::SelectionFreeze() : previous_(active_freeze) { active_freeze = this; }

SelectionFreeze::~SelectionFreeze() { active_freeze = previous_; }

void SelectionFreeze::rewind() {
  if (!picks_.empty() || !tables_.empty()) replaying_ = true;
  pick_cursor_ = 0;
  table_cursor_ = 0;
}

std::vector<std::size_t> nearest_indices(std::span<const double> queries,
                                         std::span<const double> reference) {
  if (reference.empty()) throw ContractError("nearest_indices: empty reference");
  const std::size_t n = queries.size() / 3;
  return SelectionAccess::pick(n, [&] {
    std::vector<std::size_t> idx(n);
    std::vector<double> d2(n);
    kernels::parallel::nearest(queries, reference, idx, d2);
    return idx;
  });
}

std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t k,
                                               std::size_t start) {
  if (k == 0 || k > cloud.size()) {
    throw ContractError("farthest_point_sample: k=" + std::to_string(k) +
                        " must be in [1, " + std::to_string(cloud.size()) + "]");
  }
  if (start >= cloud.size()) {
    throw ContractError("farthest_point_sample: start index out of range");
  }
  return SelectionAccess::pick(
      k, [&] { return kernels::parallel::farthest_point_sample(cloud.xyz(), k, start); });
}

NeighborIndex knn(const PointCloud& queries, const PointCloud& reference, std::size_t k) {
  if (k == 0 || k > reference.size()) {
    throw ContractError("knn: k=" + std::to_string(k) + " must be in [1, " +
                        std::to_string(reference.size()) + "]");
  }
  return SelectionAccess::table(queries.size(), k, [&] {
    auto table = kernels::parallel::knn(queries.xyz(), reference.xyz(), k);
    return NeighborIndex{k, std::move(table.indices), std::move(table.distances)};
  });
}

ad::Tensor interpolate_seed_features(const PointCloud& queries,
                                     const PointCloud& seed_coords,
                                     const ad::Tensor& seed_features, std::size_t k) {
  if (seed_coords.empty()) throw ContractError("interpolate_seed_features: empty seeds");
  if (seed_features.rank() != 2 || seed_features.dim(0) != seed_coords.size()) {
    throw ShapeError("interpolate_seed_features: feature rows do not match seed count");
  }
  const auto nbr = knn(queries, seed_coords, k);
  const std::size_t n = queries.size();
  const std::size_t c = seed_features.dim(1);

  std::vector<double> weights(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double w = 1.0 / std::max(nbr.distances[i * k + j], kInterpolationEpsilon);
      weights[i * k + j] = w;
      total += w;
    }
    for (std::size_t j = 0; j < k; ++j) weights[i * k + j] /= total;
  }
  auto w = ad::broadcast_last(ad::Tensor::from({n * k, 1}, std::move(weights)), c);
  auto gathered = ad::gather_rows(seed_features, nbr.indices);
  return ad::sum(ad::reshape(ad::mul(gathered, w), {n, k, c}), 1);
}

std::vector<std::size_t> fuse_indices(const PointCloud& seeds, const PointCloud& partial,
                                      std::size_t n0) {
  return farthest_point_sample(concat(seeds, partial), n0, 0);
}

PointCloud fuse_and_resample(const PointCloud& seeds, const PointCloud& partial,
                             std::size_t n0) {
  const auto all = concat(seeds, partial);
  return all.subset(farthest_point_sample(all, n0, 0));
}

}  // namespace seedcomp::geometry
